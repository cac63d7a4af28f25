#include "iht/optim.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "iht/errors.hpp"
#include "iht/format.hpp"

namespace iht {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kLossStop:
      return "loss_stop";
    case StopReason::kMaxSteps:
      return "max_steps";
  }
  return "unknown";
}

StopReason parse_stop_reason(std::string_view text) {
  if (text == "loss_stop") return StopReason::kLossStop;
  if (text == "max_steps") return StopReason::kMaxSteps;
  throw InvalidArgument("unknown stop reason '" + std::string(text) + "'");
}

namespace {

void validate_common(double gamma, std::size_t max_steps, double loss_stop, std::size_t trace_every) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("step size gamma must be positive and finite");
  if (max_steps < 1) throw InvalidArgument("max_steps must be >= 1");
  if (std::isnan(loss_stop)) throw InvalidArgument("loss_stop is NaN");
  if (trace_every < 1) throw InvalidArgument("trace_every must be >= 1");
}

// Shared descent loop; `project` maps the raw gradient step onto the feasible set.
template <typename Project>
Trace descend(const Objective& obj, Vector theta, double gamma, std::size_t max_steps, double loss_stop,
              std::size_t trace_every, Project project) {
  Trace trace;
  Support previous = Support::of(theta);
  for (std::size_t k = 0;; ++k) {
    ValueGrad vg = obj.value_grad(theta);
    if (!std::isfinite(vg.value)) throw DivergenceError(k, "loss is not finite");
    if (!vg.gradient.all_finite()) throw DivergenceError(k, "gradient is not finite");

    const bool done_loss = vg.value <= loss_stop;
    const bool done_steps = k == max_steps;
    Support current = Support::of(theta);
    const bool changed = k > 0 && current != previous;
    if (k % trace_every == 0 || done_loss || done_steps) {
      trace.rows.push_back(TraceRow{k, vg.value, norm2(vg.gradient), current, changed});
    }
    if (done_loss || done_steps) {
      trace.stop = done_loss ? StopReason::kLossStop : StopReason::kMaxSteps;
      trace.steps_taken = k;
      trace.final_loss = vg.value;
      trace.final_gradient = std::move(vg.gradient);
      trace.final_theta = std::move(theta);
      return trace;
    }
    previous = std::move(current);
    theta = project(axpy(theta, -gamma, vg.gradient));
    if (!theta.all_finite()) throw DivergenceError(k + 1, "iterate is not finite");
  }
}

}  // namespace

IhtResult iht_run(const Objective& obj, const SparseVector& theta0, const IhtConfig& cfg) {
  validate_common(cfg.gamma, cfg.max_steps, cfg.loss_stop, cfg.trace_every);
  const std::size_t n = obj.dim();
  if (theta0.dense.size() != n) throw InvalidArgument("iht_run: theta0 dimension mismatch");
  if (cfg.s < 1 || cfg.s > n) throw InvalidArgument("iht_run: s outside [1, n]");
  if (Support::of(theta0.dense).size() > cfg.s) throw InvalidArgument("iht_run: ||theta0||_0 exceeds s");

  Trace trace = descend(obj, theta0.dense, cfg.gamma, cfg.max_steps, cfg.loss_stop, cfg.trace_every,
                        [s = cfg.s](const Vector& v) { return hard_threshold(v, s).dense; });
  SparseVector final = SparseVector::from_dense(trace.final_theta, cfg.s);
  return IhtResult{std::move(final), std::move(trace)};
}

GdResult gd_run(const Objective& obj, const Vector& theta0, double gamma, std::size_t max_steps, double loss_stop,
                std::size_t trace_every) {
  validate_common(gamma, max_steps, loss_stop, trace_every);
  if (theta0.size() != obj.dim()) throw InvalidArgument("gd_run: theta0 dimension mismatch");
  Trace trace = descend(obj, theta0, gamma, max_steps, loss_stop, trace_every, [](Vector v) { return v; });
  Vector final = trace.final_theta;
  return GdResult{std::move(final), std::move(trace)};
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "step,loss,grad_norm,support,changed\n";
  for (const TraceRow& row : trace.rows) {
    out << row.step << ',' << format_real(row.loss) << ',' << format_real(row.grad_norm) << ','
        << row.support.to_string() << ',' << (row.support_changed ? 1 : 0) << '\n';
  }
}

}  // namespace iht
