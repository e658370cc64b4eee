#include "hcconf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcconf/error.hpp"

namespace hcconf {

namespace {

// Largest distance from any point of `from` to its nearest point of `to`.
double directed_hausdorff(std::span<const Point2> from, std::span<const Point2> to) {
  double worst = 0.0;
  for (const auto& p : from) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& q : to) {
      const double dx = p.x - q.x;
      const double dy = p.y - q.y;
      nearest = std::min(nearest, dx * dx + dy * dy);
      if (nearest <= worst) break;
    }
    worst = std::max(worst, nearest);
  }
  return std::sqrt(worst);
}

class Accumulator {
 public:
  void add(double v) {
    sum_ += v;
    sum_sq_ += v * v;
    ++n_;
  }
  std::optional<double> mean() const {
    if (n_ == 0) return std::nullopt;
    return sum_ / static_cast<double>(n_);
  }
  std::optional<MeanStd> mean_std() const {
    if (n_ == 0) return std::nullopt;
    const double m = sum_ / static_cast<double>(n_);
    const double var = std::max(0.0, sum_sq_ / static_cast<double>(n_) - m * m);
    return MeanStd{m, std::sqrt(var), n_};
  }

 private:
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::size_t n_ = 0;
};

}  // namespace

GroundTruth GroundTruth::from_ellipse(const Ellipse& e, PixelScale s) {
  return GroundTruth{e, hc_ramanujan(e, s), s};
}

std::optional<ScoreName> parse_score_name(std::string_view name) noexcept {
  if (name == "h1") return ScoreName::H1;
  if (name == "h2") return ScoreName::H2;
  if (name == "h3") return ScoreName::H3;
  if (name == "h4") return ScoreName::H4;
  return std::nullopt;
}

std::string_view to_string(ScoreName name) noexcept {
  switch (name) {
    case ScoreName::H1: return "h1";
    case ScoreName::H2: return "h2";
    case ScoreName::H3: return "h3";
    case ScoreName::H4: return "h4";
  }
  return "h?";
}

std::optional<double> score_of(const EvaluationRow& row, ScoreName name) noexcept {
  switch (name) {
    case ScoreName::H1: return row.h1;
    case ScoreName::H2: return row.h2;
    case ScoreName::H3: return row.h3;
    case ScoreName::H4: return row.h4;
  }
  return std::nullopt;
}

double dice(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::DimensionMismatch, "dice operands differ in size");
  std::size_t na = 0, nb = 0, both = 0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) {
    na += da[k];
    nb += db[k];
    both += da[k] & db[k];
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

double hausdorff(const Ellipse& e1, const Ellipse& e2, PixelScale s, std::size_t samples) {
  if (samples < 16) throw Error(ErrorCode::InvalidArgument, "hausdorff needs >= 16 samples");
  const auto p1 = ellipse_boundary_points(e1, samples);
  const auto p2 = ellipse_boundary_points(e2, samples);
  return std::max(directed_hausdorff(p1, p2), directed_hausdorff(p2, p1)) * s.mm_per_pixel;
}

EvaluationRow evaluate_case(std::string case_id, const HcMeasurement& m, const GroundTruth& gt,
                            const std::optional<VarianceScores>& scores, std::size_t width,
                            std::size_t height, const EvaluationOptions& options) {
  const bool use_mean = options.aggregate == AggregateMode::Mean;
  const Ellipse& predicted = use_mean ? m.ellipse_mean : m.ellipse_median;
  const double hc_pred = use_mean ? m.hc_mean_mm : m.hc_median_mm;

  EvaluationRow row;
  row.case_id = std::move(case_id);
  row.hc_pred_mm = hc_pred;
  row.gt_hc_mm = gt.hc_mm;
  row.abs_diff_mm = std::abs(hc_pred - gt.hc_mm);
  row.dice = dice(rasterize_ellipse(predicted, width, height),
                  rasterize_ellipse(gt.ellipse, width, height));
  row.hausdorff_mm = hausdorff(predicted, gt.ellipse, gt.scale, options.hausdorff_samples);
  if (m.bounds) {
    row.lb_mm = m.bounds->lb_mm;
    row.ub_mm = m.bounds->ub_mm;
    row.in_range = m.bounds->lb_mm <= gt.hc_mm && gt.hc_mm <= m.bounds->ub_mm;
    row.fallback_used = m.bounds->fallback_used;
  }
  if (scores) {
    row.h1 = scores->h1;
    row.h2 = scores->h2;
    row.h3 = scores->h3;
    row.h4 = scores->h4;
  }
  row.n_samples = m.n_samples;
  row.n_failed = m.n_failed;
  return row;
}

std::vector<SweepRow> sweep(std::span<const EvaluationRow> rows, ScoreName score,
                            std::size_t steps) {
  if (rows.empty()) throw Error(ErrorCode::EmptyCohort, "sweep needs at least one case");
  if (steps < 2) throw Error(ErrorCode::InvalidArgument, "sweep needs at least 2 steps");
  // Fixed summation order so the output does not depend on input order.
  std::vector<const EvaluationRow*> ordered;
  for (const auto& row : rows) ordered.push_back(&row);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* x, const auto* y) { return x->case_id < y->case_id; });

  std::vector<double> raw;
  raw.reserve(rows.size());
  for (const auto* row_ptr : ordered) {
    const auto& row = *row_ptr;
    const auto v = score_of(row, score);
    if (!v) {
      throw Error(ErrorCode::UnknownScore, std::string(to_string(score)) + " missing for case '" +
                                               row.case_id + "'");
    }
    raw.push_back(*v);
  }
  const auto normalized = normalize_scores(raw).values;

  std::vector<SweepRow> out;
  out.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps - 1);
    SweepRow sr;
    sr.score = score;
    sr.threshold = t;
    Accumulator diff, dc, hd, in_range;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      if (normalized[i] > t) {
        ++sr.n_rejected;
        continue;
      }
      ++sr.n_accepted;
      const auto& row = *ordered[i];
      if (row.abs_diff_mm) diff.add(*row.abs_diff_mm);
      if (row.dice) dc.add(*row.dice);
      if (row.hausdorff_mm) hd.add(*row.hausdorff_mm);
      if (row.in_range) in_range.add(*row.in_range ? 100.0 : 0.0);
    }
    sr.mean_abs_diff_mm = diff.mean();
    sr.mean_dice = dc.mean();
    sr.mean_hausdorff_mm = hd.mean();
    sr.pct_in_range = in_range.mean();
    out.push_back(sr);
  }
  return out;
}

EvaluationSummary summarize(std::span<const EvaluationRow> rows) {
  EvaluationSummary out;
  out.n_cases = rows.size();
  Accumulator diff, dc, hd, in_range;
  for (const auto& row : rows) {
    if (!row.ok()) {
      ++out.n_failed;
      continue;
    }
    if (row.abs_diff_mm) diff.add(*row.abs_diff_mm);
    if (row.dice) dc.add(*row.dice);
    if (row.hausdorff_mm) hd.add(*row.hausdorff_mm);
    if (row.in_range) in_range.add(*row.in_range ? 100.0 : 0.0);
  }
  out.abs_diff_mm = diff.mean_std();
  out.dice = dc.mean_std();
  out.hausdorff_mm = hd.mean_std();
  out.pct_in_range = in_range.mean();
  return out;
}

}  // namespace hcconf
