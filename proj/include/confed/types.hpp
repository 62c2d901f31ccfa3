#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace confed {

using Vec = std::vector<double>;

// Terminal status of an integration.  Numerical failure is data, not an
// exception: callers branch on retcode.  Exceptions are reserved for usage
// errors (unknown algorithm, shape mismatch, missing dt, ...).
enum class Retcode {
  Success,
  MaxIters,       // step-attempt budget exhausted
  Unstable,       // non-finite state with no adaptive escape
  DtLessThanMin,  // controller drove dt below the representable floor
  Failure,        // any other unrecoverable condition
};

const char* to_string(Retcode rc);

enum class ProblemKind { FirstOrderODE, SecondOrderODE };
enum class StiffnessHint { None, Nonstiff, Stiff };
enum class AlgFamily { ExplicitRK, Rosenbrock, BDF, Symplectic, Composite };

const char* to_string(ProblemKind k);
const char* to_string(StiffnessHint h);
const char* to_string(AlgFamily f);

// Work counters accumulated over one solve.  nsteps counts step attempts
// (accepted + rejected), which is what the attempt budget is charged against.
struct Stats {
  long nf = 0;        // RHS evaluations (FSAL reuse does not recount)
  long njac = 0;      // Jacobian constructions
  long nfactor = 0;   // LU factorizations
  long nsolve = 0;    // triangular back-substitutions
  long naccept = 0;
  long nreject = 0;
  long nsteps() const { return naccept + nreject; }
};

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define CONFED_DEFINE_ERROR(Name)                                  \
  struct Name : Error {                                            \
    explicit Name(const std::string& msg) : Error(msg) {}          \
  }

CONFED_DEFINE_ERROR(UnknownAlgorithm);
CONFED_DEFINE_ERROR(DuplicateName);
CONFED_DEFINE_ERROR(KindMismatch);
CONFED_DEFINE_ERROR(MissingDt);
CONFED_DEFINE_ERROR(ShapeMismatch);
CONFED_DEFINE_ERROR(OutOfRange);
CONFED_DEFINE_ERROR(NoDenseOutput);
CONFED_DEFINE_ERROR(DomainMismatch);
CONFED_DEFINE_ERROR(NonFiniteError);
CONFED_DEFINE_ERROR(InvalidOptions);

#undef CONFED_DEFINE_ERROR

}  // namespace confed
