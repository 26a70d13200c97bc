#include "agrnn/nonlinear.hpp"

#include <optional>

#include "agrnn/error.hpp"

namespace agrnn {

namespace {

SolveReport solve_once(const PdeProblem& problem, const RnnSpace& space, const CollocationSet& colloc,
                       const Solution* state, Linearization kind, const SolveOptions& opts) {
  LsqSystem sys = assemble(problem, linearize(problem, colloc.interior, state, kind), space, colloc);
  if (opts.frozen) return solve_qr_frozen(std::move(sys), *opts.frozen);
  return solve_qr(std::move(sys));
}

}  // namespace

SolveOutcome picard_newton_solve(const PdeProblem& problem, const RnnSpace& space, const CollocationSet& colloc,
                                 const SolveOptions& opts) {
  if (opts.picard < 0 || opts.newton < 0 || opts.picard + opts.newton < 1)
    throw Error(ErrorKind::InvalidConfig, "need It_P + It_N >= 1 with both non-negative");
  IterationLog log;
  std::optional<Solution> current;
  SolveReport report;
  Vec prev = Vec::Zero(space.size());
  for (int it = 0; it < opts.picard + opts.newton; ++it) {
    const Linearization kind = it < opts.picard ? Linearization::Picard : Linearization::Newton;
    const Solution* state = current ? &*current : opts.initial;
    try {
      report = solve_once(problem, space, colloc, state, kind, opts);
    } catch (const Error& e) {
      throw IterationError(e, log);
    }
    current.emplace(space, report.coeffs);
    const LossReport loss = loss_eta(problem, *current, colloc);
    log.records.push_back({kind, loss.loss, (report.coeffs - prev).norm()});
    prev = report.coeffs;
  }
  return SolveOutcome{std::move(*current), std::move(report), std::move(log)};
}

SolveOutcome solve_problem(const PdeProblem& problem, const RnnSpace& space, const CollocationSet& colloc,
                           const SolveOptions& opts) {
  if (is_nonlinear(problem.op)) return picard_newton_solve(problem, space, colloc, opts);
  SolveReport report = solve_once(problem, space, colloc, nullptr, Linearization::Picard, opts);
  Solution u(space, report.coeffs);
  IterationLog log;
  log.records.push_back({Linearization::Picard, loss_eta(problem, u, colloc).loss, report.coeffs.norm()});
  return SolveOutcome{std::move(u), std::move(report), std::move(log)};
}

}  // namespace agrnn
