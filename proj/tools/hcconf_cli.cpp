// hcconf: head-circumference measurement with confidence bounds from
// segmentation sample sets.
//
//   hcconf synth    --out DIR [--cases M] [--n-samples N] [--seed S] ...
//   hcconf measure  --masks DIR --pixel-size MM [--soft DIR]
//   hcconf evaluate --manifest FILE [--out evaluate.csv]
//   hcconf sweep    --eval evaluate.csv --score h1 [--out sweep.csv]

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "hcconf/biometry.hpp"
#include "hcconf/csv.hpp"
#include "hcconf/error.hpp"
#include "hcconf/manifest.hpp"
#include "hcconf/metrics.hpp"
#include "hcconf/pipeline.hpp"
#include "hcconf/synth.hpp"
#include "hcconf/uncertainty.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CommonFlags {
  std::string aggregate = "median";
  std::size_t hausdorff_k = hcconf::kDefaultHausdorffSamples;
  std::size_t threads = 0;
};

hcconf::EvaluationOptions evaluation_options(const CommonFlags& flags) {
  hcconf::EvaluationOptions opt;
  opt.aggregate = hcconf::parse_aggregate_mode(flags.aggregate).value();
  opt.hausdorff_samples = flags.hausdorff_k;
  return opt;
}

int run_synth(hcconf::SynthConfig cfg, std::size_t cases, std::size_t samples,
              const std::string& out, double tau) {
  if (tau > 0.0) cfg.tau = tau;
  const auto manifest = hcconf::gen_dataset(cfg, cases, samples, out);
  std::cout << "wrote " << cases << " cases x " << samples << " samples; manifest "
            << manifest.string() << '\n';
  return 0;
}

int run_measure(const std::string& masks, const std::string& soft, double pixel_size,
                const CommonFlags& flags) {
  hcconf::ManifestRow row;
  row.case_id = "case";
  row.masks_dir = masks;
  if (!soft.empty()) row.soft_dir = soft;
  const hcconf::SampleSet ss = hcconf::load_case(row);
  const hcconf::PixelScale scale(pixel_size);
  const hcconf::HcMeasurement m = hcconf::measure_case(ss, scale);

  const auto mode = hcconf::parse_aggregate_mode(flags.aggregate).value();
  const double hc = mode == hcconf::AggregateMode::Mean ? m.hc_mean_mm : m.hc_median_mm;
  const auto& e = mode == hcconf::AggregateMode::Mean ? m.ellipse_mean : m.ellipse_median;
  std::cout << "samples:      " << m.n_samples << " (" << m.n_failed << " fits failed)\n"
            << "HC (" << flags.aggregate << "):  " << hcconf::csv::fixed6(hc) << " mm\n"
            << "HC mean:      " << hcconf::csv::fixed6(m.hc_mean_mm) << " mm\n"
            << "HC median:    " << hcconf::csv::fixed6(m.hc_median_mm) << " mm\n"
            << "ellipse:      cx=" << hcconf::csv::fixed6(e.cx()) << " cy=" << hcconf::csv::fixed6(e.cy())
            << " a=" << hcconf::csv::fixed6(e.a()) << " b=" << hcconf::csv::fixed6(e.b())
            << " theta=" << hcconf::csv::fixed6(e.theta()) << '\n';

  std::optional<hcconf::VarianceScores> scores;
  if (m.bounds) {
    std::cout << "bounds:       [" << hcconf::csv::fixed6(m.bounds->lb_mm) << ", "
              << hcconf::csv::fixed6(m.bounds->ub_mm) << "] mm"
              << (m.bounds->fallback_used ? " (per-sample min/max fallback)" : "") << '\n';
    if (m.fits.surviving().size() >= 2) scores = hcconf::compute_scores(ss, m, scale);
  } else {
    std::cout << "bounds:       n/a (single sample)\n";
  }
  if (scores) {
    std::cout << "h1..h4:       " << hcconf::csv::fixed6(scores->h1) << ' '
              << hcconf::csv::fixed6(scores->h2) << ' ' << hcconf::csv::fixed6(scores->h3) << ' '
              << (scores->h4 ? hcconf::csv::fixed6(*scores->h4) : std::string("n/a")) << '\n';
  }
  std::cout << "csv: hc_mm,lb_mm,ub_mm,h1,h2,h3,h4,n_samples,n_failed\n"
            << "csv: " << hcconf::csv::fixed6(hc) << ','
            << (m.bounds ? hcconf::csv::fixed6(m.bounds->lb_mm) : "") << ','
            << (m.bounds ? hcconf::csv::fixed6(m.bounds->ub_mm) : "") << ','
            << (scores ? hcconf::csv::fixed6(scores->h1) : "") << ','
            << (scores ? hcconf::csv::fixed6(scores->h2) : "") << ','
            << (scores ? hcconf::csv::fixed6(scores->h3) : "") << ','
            << (scores ? hcconf::csv::fixed6(scores->h4) : "") << ',' << m.n_samples << ','
            << m.n_failed << '\n';
  return 0;
}

int run_evaluate(const std::string& manifest, const std::string& out, const CommonFlags& flags) {
  const auto rows = hcconf::parse_manifest(manifest);
  hcconf::PipelineOptions opt;
  opt.evaluation = evaluation_options(flags);
  opt.threads = flags.threads;
  const auto results = hcconf::run_evaluation(rows, opt);
  hcconf::write_evaluation_csv(results, out);
  const auto summary = hcconf::summarize(results);
  std::cout << hcconf::format_summary(summary) << "wrote " << out << '\n';
  for (const auto& r : results) {
    if (!r.ok()) std::cerr << r.case_id << ": " << r.error << '\n';
  }
  return summary.n_failed == summary.n_cases ? kExitData : 0;
}

int run_sweep(const std::string& eval, const std::string& score, std::size_t steps,
              const std::string& out) {
  const auto name = hcconf::parse_score_name(score);
  if (!name) throw hcconf::Error(hcconf::ErrorCode::UnknownScore, "'" + score + "'");
  const auto rows = hcconf::run_sweep(eval, *name, steps);
  hcconf::write_sweep_csv(rows, out);
  std::cout << "wrote " << rows.size() << " thresholds to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Head-circumference measurement with confidence bounds from segmentation samples"};
  app.require_subcommand(1);

  CommonFlags common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--aggregate", common.aggregate, "Point estimate: mean or median")
        ->check(CLI::IsMember({"mean", "median"}))
        ->capture_default_str();
    sub->add_option("--hausdorff-k", common.hausdorff_k, "Boundary samples per outline")
        ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 20))
        ->capture_default_str();
    sub->add_option("--threads", common.threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
  };

  // synth
  hcconf::SynthConfig cfg;
  std::size_t cases = 200;
  std::size_t samples = 16;
  std::string synth_out;
  double tau = 0.0;
  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic cohort");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", cfg.seed, "Cohort seed")->capture_default_str();
  synth->add_option("--cases", cases, "Number of cases")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--n-samples", samples, "Samples per case")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--width", cfg.width, "Grid width (px)")->capture_default_str();
  synth->add_option("--height", cfg.height, "Grid height (px)")->capture_default_str();
  synth->add_option("--sigma-center", cfg.sigma_center, "Centre noise (px)")->capture_default_str();
  synth->add_option("--sigma-axes", cfg.sigma_axes, "Axis noise (px)")->capture_default_str();
  synth->add_option("--sigma-theta", cfg.sigma_theta, "Orientation noise (rad)")->capture_default_str();
  synth->add_option("--multiplier-min", cfg.multiplier_min, "Per-case sigma multiplier lower bound")->capture_default_str();
  synth->add_option("--multiplier-max", cfg.multiplier_max, "Per-case sigma multiplier upper bound")->capture_default_str();
  synth->add_option("--sector-deg", cfg.sector_dropout_deg, "Contour sector dropped per sample (deg)")->capture_default_str();
  synth->add_option("--tau", tau, "Soft-map sharpness; 0 writes no soft maps")->capture_default_str();

  // measure
  std::string masks_dir, soft_dir;
  double pixel_size = 0.0;
  auto* measure = app.add_subcommand("measure", "Measure one case from a directory of NNN.pgm masks");
  measure->add_option("--masks", masks_dir, "Directory of mask PGMs")->required();
  measure->add_option("--soft", soft_dir, "Directory of matching soft-map PGMs");
  measure->add_option("--pixel-size", pixel_size, "mm per pixel")->required()->check(CLI::PositiveNumber);
  add_common(measure);

  // evaluate
  std::string manifest, eval_out = "evaluate.csv";
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate every case of a manifest");
  evaluate->add_option("--manifest", manifest, "Manifest CSV")->required();
  evaluate->add_option("--out", eval_out, "Evaluation CSV")->capture_default_str();
  add_common(evaluate);

  // sweep
  std::string eval_in, score = "h1", sweep_out = "sweep.csv";
  std::size_t steps = hcconf::kDefaultSweepSteps;
  auto* sweep = app.add_subcommand("sweep", "Accept/reject threshold sweep over one score");
  sweep->add_option("--eval", eval_in, "Evaluation CSV")->required();
  sweep->add_option("--score", score, "h1, h2, h3 or h4")->capture_default_str();
  sweep->add_option("--steps", steps, "Number of thresholds")->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))->capture_default_str();
  sweep->add_option("--out", sweep_out, "Sweep CSV")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth) return run_synth(cfg, cases, samples, synth_out, tau);
    if (*measure) return run_measure(masks_dir, soft_dir, pixel_size, common);
    if (*evaluate) return run_evaluate(manifest, eval_out, common);
    if (*sweep) return run_sweep(eval_in, score, steps, sweep_out);
  } catch (const hcconf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == hcconf::ErrorCode::InvalidArgument ||
                   e.code() == hcconf::ErrorCode::UnknownScore
               ? kExitUsage
               : kExitData;
  }
  return kExitUsage;
}
