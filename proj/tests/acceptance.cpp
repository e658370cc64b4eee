// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcconf/pipeline.hpp"
#include "hcconf/rng.hpp"
#include "hcconf/synth.hpp"
#include "hcconf/uncertainty.hpp"

using namespace hcconf;
namespace fs = std::filesystem;

namespace {

// Tolerances and sizes.
constexpr double kRamanujanTol = 1e-6;
constexpr double kRamanujanMaxRatio = 3.0;
constexpr double kRamanujanSeconds = 5.0;
constexpr std::size_t kRamanujanCount = 1000;

constexpr std::size_t kFitCount = 500;
constexpr std::size_t kFitPoints = 100;
constexpr double kFitMaxRatio = 10.0;
constexpr double kFitTol = 1e-6;
constexpr double kRasterAxisTol = 0.02;
constexpr double kRasterCentreTol = 0.5;
constexpr double kFitSeconds = 30.0;

constexpr double kBandTol = 0.02;

constexpr std::size_t kCohortCases = 200;
constexpr std::size_t kCohortSamples = 16;
constexpr double kMinSpearman = 0.5;
constexpr double kCohortSeconds = 60.0;

constexpr std::size_t kRangeSampleCounts[] = {2, 8, 32, 128};

constexpr double kNoiselessHcTol = 0.02;
constexpr double kNoiselessDice = 0.98;

constexpr double kDiceHandCount = 2.0 * 50 / 150;
constexpr double kDiceTol = 1e-4;
constexpr double kConcentricHausdorff = 10.0;
constexpr double kHausdorffTol = 0.005;
constexpr double kPixelOracleTol = 0.02;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Perimeter by the Gauss-Kummer series pi (a + b) sum binom(1/2, n)^2 h^n.
double perimeter_series(double a, double b) {
  const double h = std::pow((a - b) / (a + b), 2);
  double sum = 1.0, coeff = 1.0, hn = 1.0;
  for (int n = 1; n < 400; ++n) {
    coeff *= (0.5 - (n - 1)) / n;
    hn *= h;
    const double term = coeff * coeff * hn;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return kPi * (a + b) * sum;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<EvaluationRow> evaluate_cohort(const SynthConfig& cfg, std::size_t cases,
                                           std::size_t samples) {
  return run_indexed(cases, 0, [&](std::size_t i) {
    const auto rec = make_case(cfg, i, samples);
    return evaluate_sample_set(rec.case_id, rec.samples, rec.gt, {});
  });
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Number of files under `a` whose bytes differ from (or are missing in) `b`; -1 if `a` is empty.
long count_differences(const fs::path& a, const fs::path& b, std::size_t& files) {
  files = 0;
  long diff = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const auto other = b / fs::relative(entry.path(), a);
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ++diff;
  }
  return files == 0 ? -1 : diff;
}

Outcome ramanujan_vs_quadrature() {
  const auto t0 = Clock::now();
  Rng rng(substream_seed(kDefaultSeed, 1, 7));
  double worst = 0, worst_oracle = 0;
  for (std::size_t i = 0; i < kRamanujanCount; ++i) {
    const double a = rng.uniform(1.0, 500.0);
    const double b = a / rng.uniform(1.0, kRamanujanMaxRatio);
    const auto e = Ellipse::make(0, 0, a, b, rng.uniform(0, kPi));
    const PixelScale s(rng.uniform(0.05, 0.35));
    const double quad = perimeter_quadrature(e, s, 1e-12);
    worst = std::max(worst, std::abs(hc_ramanujan(e, s) - quad) / quad);
    const double oracle = perimeter_series(e.a(), e.b()) * s.mm_per_pixel;
    worst_oracle = std::max(worst_oracle, std::abs(quad - oracle) / oracle);
  }
  const double t = seconds_since(t0);
  return {worst <= kRamanujanTol && worst_oracle <= 1e-10 && t < kRamanujanSeconds,
          fmt("max rel err %.3g (quadrature vs series oracle %.3g) over %zu ellipses, %.2f s",
              worst, worst_oracle, kRamanujanCount, t)};
}

Outcome fit_recovery() {
  const auto t0 = Clock::now();
  Rng rng(substream_seed(kDefaultSeed, 2, 7));
  double worst_analytic = 0;
  for (std::size_t i = 0; i < kFitCount; ++i) {
    const double a = rng.uniform(10.0, 200.0);
    const double b = a / rng.uniform(1.0, kFitMaxRatio);
    const auto e = Ellipse::make(rng.uniform(0, 320), rng.uniform(0, 384), a, b, rng.uniform(0, kPi));
    const auto f = fit_ellipse(ellipse_boundary_points(e, kFitPoints));
    const double dtheta = std::abs(orientation_delta(f.theta(), e.theta()));
    worst_analytic = std::max({worst_analytic, std::abs(f.cx() - e.cx()), std::abs(f.cy() - e.cy()),
                               std::abs(f.a() - e.a()), std::abs(f.b() - e.b()), dtheta});
  }

  double worst_axis = 0, worst_centre = 0;
  for (std::size_t i = 0; i < kFitCount; ++i) {
    const double a = rng.uniform(30.0, 150.0);
    const double b = rng.uniform(30.0, a);
    const double theta = rng.uniform(0, kPi);
    const double c = std::cos(theta), s = std::sin(theta);
    const double hx = std::sqrt(a * a * c * c + b * b * s * s) + 2;
    const double hy = std::sqrt(a * a * s * s + b * b * c * c) + 2;
    const auto e = Ellipse::make(rng.uniform(hx, 319 - hx), rng.uniform(hy, 383 - hy), a, b, theta);
    const auto f = fit_ellipse(extract_contour(rasterize_ellipse(e, 320, 384)));
    worst_axis = std::max({worst_axis, std::abs(f.a() - e.a()) / e.a(), std::abs(f.b() - e.b()) / e.b()});
    worst_centre = std::max(worst_centre, std::hypot(f.cx() - e.cx(), f.cy() - e.cy()));
  }
  const double t = seconds_since(t0);
  return {worst_analytic <= kFitTol && worst_axis <= kRasterAxisTol &&
              worst_centre <= kRasterCentreTol && t < kFitSeconds,
          fmt("analytic max err %.3g; raster max axis err %.4f, max centre err %.3f px; %.2f s",
              worst_analytic, worst_axis, worst_centre, t)};
}

Outcome sandwich() {
  SynthConfig cfg;
  cfg.seed = 3;
  std::size_t violations = 0, sets = 0;
  for (std::size_t i = 0; i < 40; ++i) {
    const auto rec = make_case(cfg, i, 8);
    const auto u = mask_union(rec.samples.masks());
    const auto n = mask_intersection(rec.samples.masks());
    for (const auto& m : rec.samples.masks()) {
      for (std::size_t k = 0; k < m.size(); ++k) {
        violations += n.data()[k] > m.data()[k] || m.data()[k] > u.data()[k];
      }
    }
    ++sets;
  }

  Rng rng(substream_seed(kDefaultSeed, 3, 7));
  double worst_band = 0;
  std::size_t outside = 0, families = 0;
  for (std::size_t i = 0; i < 40; ++i) {
    const double a = rng.uniform(50.0, 100.0);
    const double b = a / rng.uniform(1.0, 1.6);
    const double theta = rng.uniform(0, kPi);
    const std::size_t members = 3 + static_cast<std::size_t>(rng.uniform() * 4);
    std::vector<Ellipse> family;
    for (std::size_t k = 0; k < members; ++k) {
      const double f = rng.uniform(0.75, 1.3);
      family.push_back(Ellipse::make(160, 192, a * f, b * f, theta));
    }
    std::vector<BinaryMask> masks;
    for (const auto& e : family) masks.push_back(rasterize_ellipse(e, 320, 384));
    const SampleSet ss(std::move(masks));
    const PixelScale s(0.1);
    const auto fits = fit_samples(ss);
    const auto bounds = bounds_from_samples(ss, fits, s);
    double lo = INFINITY, hi = 0;
    for (const auto& e : fits.surviving()) {
      const double hc = hc_ramanujan(e, s);
      lo = std::min(lo, hc);
      hi = std::max(hi, hc);
      outside += bounds.lb_mm > hc * (1 + kBandTol) || bounds.ub_mm < hc * (1 - kBandTol);
    }
    worst_band = std::max({worst_band, std::abs(bounds.lb_mm - lo) / lo, std::abs(bounds.ub_mm - hi) / hi});
    ++families;
  }
  return {violations == 0 && outside == 0 && worst_band <= kBandTol,
          fmt("%zu pixel violations over %zu sample sets; %zu HCs outside bounds, extreme-member "
              "gap %.4f over %zu concentric families",
              violations, sets, outside, worst_band, families)};
}

Outcome score_zeros() {
  SynthConfig cfg;
  cfg.sigma_center = cfg.sigma_axes = cfg.sigma_theta = 0.0;
  cfg.seed = 4;
  std::size_t nonzero = 0, sets = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto rec = make_case(cfg, i, 2 + i % 5);
    std::vector<SoftMask> hard;
    for (const auto& m : rec.samples.masks()) {
      SoftMask s(m.width(), m.height());
      for (std::size_t k = 0; k < m.size(); ++k) s.data()[k] = m.data()[k];
      hard.push_back(std::move(s));
    }
    const std::vector<BinaryMask> masks(rec.samples.masks().begin(), rec.samples.masks().end());
    const SampleSet ss(masks, hard);
    const auto scores = compute_scores(ss, measure_case(ss, rec.gt.scale), rec.gt.scale);
    nonzero += scores.h1 != 0.0 || scores.h2 != 0.0 || scores.h3 != 0.0 || scores.h4 != 0.0;
    ++sets;
  }

  SynthConfig noisy;
  noisy.seed = 5;
  std::size_t over = 0;
  double max_ratio = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto rec = make_case(noisy, i, 2 + i % 7);
    const double k = static_cast<double>(noisy.width * noisy.height);
    const double h3 = score_h3(rec.samples.masks());
    max_ratio = std::max(max_ratio, h3 / (k / std::exp(1.0)));
    over += h3 > k / std::exp(1.0);
  }
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    std::vector<BinaryMask> masks(2 + i % 4, BinaryMask(32, 32));
    for (auto& m : masks) {
      for (auto& v : m.data()) v = rng.uniform() < 0.5;
    }
    const double h3 = score_h3(masks);
    max_ratio = std::max(max_ratio, h3 / (1024 / std::exp(1.0)));
    over += h3 > 1024 / std::exp(1.0);
  }
  return {nonzero == 0 && over == 0,
          fmt("%zu of %zu identical sets with a non-zero score; h3 / (K/e) at most %.4f", nonzero,
              sets, max_ratio)};
}

struct CohortChecks {
  Outcome correlation;
  Outcome sweep_gain;
};

CohortChecks default_cohort() {
  const auto t0 = Clock::now();
  const SynthConfig cfg;
  const auto rows = evaluate_cohort(cfg, kCohortCases, kCohortSamples);
  const double t = seconds_since(t0);

  std::vector<EvaluationRow> ok;
  for (const auto& r : rows) {
    if (r.ok() && r.h1) ok.push_back(r);
  }
  std::vector<double> diff, h1, h2, h3;
  for (const auto& r : ok) {
    diff.push_back(*r.abs_diff_mm);
    h1.push_back(*r.h1);
    h2.push_back(*r.h2);
    h3.push_back(*r.h3);
  }
  const double r1 = spearman(h1, diff);
  const double r2 = spearman(h2, diff);
  const double r3 = spearman(h3, diff);
  CohortChecks out;
  out.correlation = {ok.size() == kCohortCases && r1 >= kMinSpearman && r2 >= kMinSpearman &&
                         r3 >= kMinSpearman && t <= kCohortSeconds,
                     fmt("Spearman vs abs_diff: h1 %.3f, h2 %.3f, h3 %.3f (%zu/%zu cases), %.1f s",
                         r1, r2, r3, ok.size(), kCohortCases, t)};

  std::string detail;
  bool pass = true;
  for (auto score : {ScoreName::H1, ScoreName::H2}) {
    const auto curve = sweep(ok, score, kDefaultSweepSteps);
    double best = INFINITY, best_t = 1;
    for (const auto& row : curve) {
      if (row.mean_abs_diff_mm && *row.mean_abs_diff_mm < best) {
        best = *row.mean_abs_diff_mm;
        best_t = row.threshold;
      }
    }
    const double full = *curve.back().mean_abs_diff_mm;
    pass = pass && best < full;
    detail += fmt("%s min %.4f mm at t=%.2f vs %.4f mm at t=1; ", std::string(to_string(score)).c_str(),
                  best, best_t, full);
  }
  detail.resize(detail.size() - 2);
  out.sweep_gain = {pass, detail};
  return out;
}

Outcome in_range_vs_samples() {
  const SynthConfig cfg;
  std::vector<double> pct;
  std::string detail = "pct_in_range";
  for (std::size_t n : kRangeSampleCounts) {
    const auto rows = evaluate_cohort(cfg, kCohortCases, n);
    const auto s = summarize(rows);
    pct.push_back(s.pct_in_range.value_or(-1));
    detail += fmt(" N=%zu: %.1f%%", n, pct.back());
  }
  return {pct.back() >= pct.front(), detail};
}

Outcome determinism(const std::string& cli) {
  const auto root = fs::temp_directory_path() / "hcconf_acceptance_determinism";
  fs::remove_all(root);
  SynthConfig cfg;
  cfg.seed = 8;
  cfg.tau = 0.05;
  cfg.sector_dropout_deg = 20;
  for (const char* run : {"a", "b"}) {
    const auto dir = root / "lib" / run;
    const auto rows = run_evaluation(parse_manifest(gen_dataset(cfg, 6, 4, dir)), {});
    write_evaluation_csv(rows, dir / "evaluate.csv");
    for (auto score : {ScoreName::H1, ScoreName::H2, ScoreName::H3, ScoreName::H4}) {
      write_sweep_csv(run_sweep(dir / "evaluate.csv", score, kDefaultSweepSteps),
                      dir / ("sweep_" + std::string(to_string(score)) + ".csv"));
    }
  }
  std::size_t files = 0;
  const long lib_diff = count_differences(root / "lib" / "a", root / "lib" / "b", files);
  std::string detail = fmt("library: %ld of %zu files differ", lib_diff, files);
  bool pass = lib_diff == 0;

  if (!cli.empty()) {
    for (const char* run : {"a", "b"}) {
      const auto dir = (root / "cli" / run).string();
      const std::string cmds[] = {
          "\"" + cli + "\" synth --out \"" + dir + "\" --cases 6 --n-samples 4 --seed 8 --tau 0.05",
          "\"" + cli + "\" evaluate --manifest \"" + dir + "/manifest.csv\" --out \"" + dir + "/evaluate.csv\"",
          "\"" + cli + "\" sweep --eval \"" + dir + "/evaluate.csv\" --score h2 --out \"" + dir + "/sweep.csv\""};
      for (const auto& c : cmds) {
        if (std::system((c + " > /dev/null").c_str()) != 0) {
          return {false, detail + "; cli command failed: " + c};
        }
      }
    }
    const long cli_diff = count_differences(root / "cli" / "a", root / "cli" / "b", files);
    detail += fmt("; cli: %ld of %zu files differ", cli_diff, files);
    pass = pass && cli_diff == 0;
  }
  fs::remove_all(root);
  return {pass, detail};
}

Outcome noiseless_end_to_end() {
  SynthConfig cfg;
  cfg.sigma_center = cfg.sigma_axes = cfg.sigma_theta = 0.0;
  const auto rows = evaluate_cohort(cfg, kCohortCases, 4);
  std::size_t bad = 0;
  double worst_rel = 0, worst_dice = 1;
  for (const auto& r : rows) {
    if (!r.ok()) {
      ++bad;
      continue;
    }
    const double rel = *r.abs_diff_mm / *r.gt_hc_mm;
    worst_rel = std::max(worst_rel, rel);
    worst_dice = std::min(worst_dice, *r.dice);
    bad += rel > kNoiselessHcTol || *r.dice < kNoiselessDice;
  }
  return {bad == 0, fmt("%zu of %zu cases out of tolerance; max rel HC err %.4f, min dice %.4f", bad,
                        rows.size(), worst_rel, worst_dice)};
}

Outcome metric_oracles() {
  BinaryMask a(20, 10), b(20, 10);
  for (std::size_t r = 0; r < 10; ++r) {
    for (std::size_t c = 0; c < 10; ++c) a.at(c, r) = 1;
    for (std::size_t c = 5; c < 10; ++c) b.at(c, r) = 1;
  }
  const double d = dice(a, b);

  const double h = hausdorff(Ellipse::make(0, 0, 50, 50, 0), Ellipse::make(0, 0, 60, 60, 0), PixelScale(1.0));
  const double h_rel = std::abs(h - kConcentricHausdorff) / kConcentricHausdorff;

  std::vector<BinaryMask> masks;
  for (double k : {0.8, 0.9, 1.0, 1.15}) {
    masks.push_back(rasterize_ellipse(Ellipse::make(160, 192, 90 * k, 70 * k, 0.6), 320, 384));
  }
  const SampleSet ss(masks);
  const PixelScale s(0.2);
  const double h2 = score_h2(bounds_from_samples(ss, s), s);
  std::size_t ring = 0;
  for (std::size_t k = 0; k < masks[0].size(); ++k) {
    std::size_t votes = 0;
    for (const auto& m : masks) votes += m.data()[k];
    ring += votes > 0 && votes < masks.size();
  }
  const double oracle = static_cast<double>(ring) * s.mm_per_pixel * s.mm_per_pixel;
  const double h2_rel = std::abs(h2 - oracle) / oracle;
  return {std::abs(d - kDiceHandCount) <= kDiceTol && h_rel <= kHausdorffTol && h2_rel <= kPixelOracleTol,
          fmt("dice %.4f (want 0.6667); concentric hausdorff %.4f mm (rel err %.4f); h2 vs pixel "
              "oracle rel err %.4f",
              d, h, h_rel, h2_rel)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hcconf acceptance checks"};
  std::string cli;
  app.add_option("--cli", cli, "hcconf executable for the end-to-end determinism run");
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("[%s] %2d %-26s %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };
  auto guarded = [](const std::function<Outcome()>& f) -> Outcome {
    try {
      return f();
    } catch (const std::exception& e) {
      return {false, std::string("exception: ") + e.what()};
    }
  };

  report(1, "ramanujan-vs-quadrature", guarded(ramanujan_vs_quadrature));
  report(2, "fit-recovery", guarded(fit_recovery));
  report(3, "mask-sandwich", guarded(sandwich));
  report(4, "score-zeros", guarded(score_zeros));
  CohortChecks cohort;
  try {
    cohort = default_cohort();
  } catch (const std::exception& e) {
    cohort.correlation = cohort.sweep_gain = {false, std::string("exception: ") + e.what()};
  }
  report(5, "score-correlation", cohort.correlation);
  report(6, "sweep-improvement", cohort.sweep_gain);
  report(7, "in-range-vs-N", guarded(in_range_vs_samples));
  report(8, "determinism", guarded([&] { return determinism(cli); }));
  report(9, "noiseless-end-to-end", guarded(noiseless_end_to_end));
  report(10, "metric-oracles", guarded(metric_oracles));

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
