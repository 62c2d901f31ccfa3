#include "confed/registry.hpp"

#include <algorithm>

#include "confed/autoswitch.hpp"
#include "confed/steppers_explicit.hpp"
#include "confed/stiff.hpp"

namespace confed {

bool AlgorithmDescriptor::supports(ProblemKind k) const {
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

void Registry::register_algorithm(RegistryEntry entry) {
  const std::string& name = entry.desc.name;
  if (name.empty()) throw InvalidOptions("algorithm name must be nonempty");
  if (entries_.count(name))
    throw DuplicateName("algorithm '" + name + "' is already registered");
  const bool first = entry.desc.supports(ProblemKind::FirstOrderODE);
  const bool second = entry.desc.supports(ProblemKind::SecondOrderODE);
  if (first && !entry.make_first)
    throw InvalidOptions("'" + name + "' declares FirstOrderODE but has no factory");
  if (second && !entry.make_second)
    throw InvalidOptions("'" + name + "' declares SecondOrderODE but has no factory");
  if (!first && !second)
    throw InvalidOptions("'" + name + "' declares no problem kind");
  entries_.emplace(name, std::move(entry));
}

bool Registry::contains(const std::string& name) const {
  return entries_.count(name) != 0;
}

const RegistryEntry& Registry::at(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end())
    throw UnknownAlgorithm("no algorithm named '" + name + "'");
  return it->second;
}

std::vector<AlgorithmDescriptor> Registry::list(
    std::optional<ProblemKind> kind) const {
  std::vector<AlgorithmDescriptor> out;
  for (const auto& [name, entry] : entries_) {
    if (kind && !entry.desc.supports(*kind)) continue;
    out.push_back(entry.desc);
  }
  return out;  // map iteration is already name-sorted
}

namespace {

RegistryEntry first_order_entry(AlgorithmDescriptor desc, FirstOrderFactory f) {
  RegistryEntry e;
  e.desc = std::move(desc);
  e.make_first = std::move(f);
  return e;
}

void populate_builtins(Registry& reg) {
  reg.register_algorithm(first_order_entry(
      {"euler", AlgFamily::ExplicitRK, 1, false, false,
       {ProblemKind::FirstOrderODE},
       "forward Euler, fixed step (dt required)"},
      make_euler));
  reg.register_algorithm(first_order_entry(
      {"rk4", AlgFamily::ExplicitRK, 4, false, false,
       {ProblemKind::FirstOrderODE},
       "classic 4th-order Runge-Kutta, fixed step (dt required)"},
      make_rk4));
  reg.register_algorithm(first_order_entry(
      {"tsit5", AlgFamily::ExplicitRK, 5, true, false,
       {ProblemKind::FirstOrderODE},
       "Tsitouras 5(4) adaptive pair, the non-stiff default"},
      make_tsit5));
  reg.register_algorithm(first_order_entry(
      {"dp5", AlgFamily::ExplicitRK, 5, true, false,
       {ProblemKind::FirstOrderODE},
       "Dormand-Prince 5(4) adaptive pair (FSAL)"},
      make_dp5));
  reg.register_algorithm(first_order_entry(
      {"dp5_lowtol", AlgFamily::ExplicitRK, 5, true, false,
       {ProblemKind::FirstOrderODE},
       "Dormand-Prince 5(4) with a conservative controller for tight tolerances"},
      make_dp5_lowtol));
  reg.register_algorithm(first_order_entry(
      {"rosenbrock23", AlgFamily::Rosenbrock, 2, true, true,
       {ProblemKind::FirstOrderODE},
       "2nd/3rd-order Rosenbrock W-method for stiff systems"},
      make_rosenbrock23));
  reg.register_algorithm(first_order_entry(
      {"bdf", AlgFamily::BDF, 3, true, true,
       {ProblemKind::FirstOrderODE},
       "variable-order BDF(1-3) with quasi-constant steps"},
      make_bdf));

  {
    RegistryEntry e;
    e.desc = {"verlet", AlgFamily::Symplectic, 2, false, false,
              {ProblemKind::SecondOrderODE},
              "velocity Verlet, symplectic fixed step (dt required)"};
    e.make_second = make_verlet;
    e.make_first = nullptr;
    reg.register_algorithm(std::move(e));
  }

  // The registered name is the default pairing; solve() also accepts the
  // parameterized spelling "autoswitch(a,b)" and builds the pair on the fly.
  reg.register_algorithm(first_order_entry(
      {"autoswitch", AlgFamily::Composite, 5, true, true,
       {ProblemKind::FirstOrderODE},
       "stiffness-switching composite, default tsit5 <-> rosenbrock23"},
      [](const ODEProblem& prob, const SolverOptions& opts, Stats& stats) {
        return make_autoswitch("tsit5", "rosenbrock23", default_registry(),
                               prob, opts, stats);
      }));
}

}  // namespace

Registry builtin_registry() {
  Registry reg;
  populate_builtins(reg);
  return reg;
}

Registry& default_registry() {
  static Registry reg = builtin_registry();
  return reg;
}

}  // namespace confed
