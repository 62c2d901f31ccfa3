#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confed/stepper.hpp"

namespace confed {

struct AlgorithmDescriptor {
  std::string name;
  AlgFamily family = AlgFamily::ExplicitRK;
  int order = 1;
  bool adaptive = false;
  bool stiff_capable = false;
  std::vector<ProblemKind> kinds = {ProblemKind::FirstOrderODE};
  std::string summary;  // one line for `list`/`explain`

  bool supports(ProblemKind k) const;
};

using FirstOrderFactory = std::function<StepperPtr(
    const ODEProblem&, const SolverOptions&, Stats&)>;
using SecondOrderFactory = std::function<StepperPtr(
    const SecondOrderODEProblem&, const SolverOptions&, Stats&)>;

struct RegistryEntry {
  AlgorithmDescriptor desc;
  FirstOrderFactory make_first;    // null when kinds lack FirstOrderODE
  SecondOrderFactory make_second;  // null when kinds lack SecondOrderODE
};

// Name -> integrator table.  A Registry is a plain value: copy it, extend the
// copy, pass it to solve().  The process-wide default_registry() holds the
// built-ins and accepts registrations from client code, so new integrators
// plug in without touching core sources.
class Registry {
 public:
  // Throws DuplicateName if desc.name is taken, InvalidOptions if no factory
  // matches the declared kinds.
  void register_algorithm(RegistryEntry entry);

  bool contains(const std::string& name) const;
  const RegistryEntry& at(const std::string& name) const;  // UnknownAlgorithm

  // Sorted by name; optionally filtered to algorithms supporting `kind`.
  std::vector<AlgorithmDescriptor> list(
      std::optional<ProblemKind> kind = std::nullopt) const;

 private:
  std::map<std::string, RegistryEntry> entries_;
};

// Mutable process-wide instance, populated with the built-ins on first use.
Registry& default_registry();

// Fresh registry holding only the built-ins.
Registry builtin_registry();

}  // namespace confed
