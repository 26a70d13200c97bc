#pragma once

#include <vector>

#include "agrnn/assembly.hpp"
#include "agrnn/error.hpp"
#include "agrnn/basis.hpp"
#include "agrnn/pde.hpp"

namespace agrnn {

struct IterationRecord {
  Linearization kind = Linearization::Picard;
  double loss = 0.0;
  double coeff_change = 0.0;  // ||c_k - c_{k-1}||_2, c_0 = 0
};

struct IterationLog {
  std::vector<IterationRecord> records;
};

/// Thrown when a solve fails mid-iteration; carries the iterations completed so far.
class IterationError : public Error {
 public:
  IterationError(const Error& cause, IterationLog log) : Error(cause), log_(std::move(log)) {}
  const IterationLog& log() const { return log_; }

 private:
  IterationLog log_;
};

struct SolveOutcome {
  Solution solution;
  SolveReport report;
  IterationLog log;
};

struct SolveOptions {
  int picard = 1;
  int newton = 0;
  const Solution* initial = nullptr;  // state of the first linearization (zero if null)
  const Vec* frozen = nullptr;        // leading coefficients kept fixed
};

/// It_P Picard steps then It_N Newton steps, each a full re-assembly and QR solve.
SolveOutcome picard_newton_solve(const PdeProblem& problem, const RnnSpace& space, const CollocationSet& colloc,
                                 const SolveOptions& opts);

/// One solve for linear operators, the Picard/Newton loop otherwise.
SolveOutcome solve_problem(const PdeProblem& problem, const RnnSpace& space, const CollocationSet& colloc,
                           const SolveOptions& opts = {});

}  // namespace agrnn
