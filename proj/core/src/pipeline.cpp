#include "hcconf/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>

#include "hcconf/csv.hpp"
#include "hcconf/error.hpp"
#include "hcconf/pgm.hpp"
#include "hcconf/uncertainty.hpp"

namespace hcconf {

namespace {

// Sorted NNN.pgm file names (digits only before the extension).
std::vector<std::filesystem::path> sample_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".pgm") continue;
    const auto stem = entry.path().stem().string();
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot list '" + dir.string() + "': " + ec.message());
  std::sort(files.begin(), files.end(), [](const auto& x, const auto& y) {
    return x.filename().string() < y.filename().string();
  });
  return files;
}

std::vector<std::optional<AngularSector>> read_sectors(const std::filesystem::path& file,
                                                       std::size_t n) {
  std::vector<std::optional<AngularSector>> out(n);
  const auto records = csv::read_file(file);
  if (records.empty()) return out;
  const csv::Columns cols(records.front());
  const auto c_sample = cols.require("sample");
  const auto c_start = cols.require("start_rad");
  const auto c_width = cols.require("width_rad");
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    const auto get = [&](std::size_t c) {
      const auto v = c < rec.size() ? csv::parse_double(rec[c]) : std::nullopt;
      if (!v) throw Error(ErrorCode::BadNumber, "bad number in '" + file.string() + "'");
      return *v;
    };
    const double idx = get(c_sample);
    if (idx < 0 || idx >= static_cast<double>(n)) continue;
    out[static_cast<std::size_t>(idx)] = AngularSector{get(c_start), get(c_width)};
  }
  return out;
}

std::string bool_field(const std::optional<bool>& v) {
  if (!v) return {};
  return *v ? "1" : "0";
}

std::optional<double> opt_number(const csv::Record& rec, std::optional<std::size_t> col,
                                 std::string_view name) {
  if (!col || *col >= rec.size() || rec[*col].empty()) return std::nullopt;
  const auto v = csv::parse_double(rec[*col]);
  if (!v) throw Error(ErrorCode::BadNumber, std::string(name) + " = '" + rec[*col] + "'");
  return v;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

}  // namespace

SampleSet load_case(const ManifestRow& row) {
  const auto files = sample_files(row.masks_dir);
  if (files.empty()) {
    throw Error(ErrorCode::IoError, "no NNN.pgm masks in '" + row.masks_dir.string() + "'");
  }
  std::vector<BinaryMask> masks;
  masks.reserve(files.size());
  for (const auto& f : files) masks.push_back(read_mask_pgm(f));

  std::vector<SoftMask> soft;
  if (row.soft_dir) {
    for (const auto& f : files) soft.push_back(read_soft_pgm(*row.soft_dir / f.filename()));
  }
  std::vector<std::optional<AngularSector>> sectors;
  const auto sector_file = row.masks_dir / "sectors.csv";
  if (std::filesystem::exists(sector_file)) sectors = read_sectors(sector_file, files.size());
  return SampleSet(std::move(masks), std::move(soft), std::move(sectors));
}

EvaluationRow evaluate_sample_set(const std::string& case_id, const SampleSet& ss,
                                  const GroundTruth& gt, const EvaluationOptions& options) {
  try {
    const HcMeasurement m = measure_case(ss, gt.scale);
    std::optional<VarianceScores> scores;
    if (m.bounds && m.fits.surviving().size() >= 2) scores = compute_scores(ss, m, gt.scale);
    return evaluate_case(case_id, m, gt, scores, ss.width(), ss.height(), options);
  } catch (const Error& err) {
    EvaluationRow row;
    row.case_id = case_id;
    row.gt_hc_mm = gt.hc_mm;
    row.n_samples = ss.size();
    row.error = err.what();
    return row;
  }
}

std::vector<EvaluationRow> run_indexed(std::size_t count, std::size_t threads,
                                       const std::function<EvaluationRow(std::size_t)>& job) {
  std::vector<EvaluationRow> rows(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) rows[i] = job(i);
  };
  if (threads <= 1) {
    worker();
    return rows;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  return rows;
}

std::vector<EvaluationRow> run_evaluation(const std::vector<ManifestRow>& manifest,
                                          const PipelineOptions& options) {
  return run_indexed(manifest.size(), options.threads, [&](std::size_t i) {
    const auto& row = manifest[i];
    try {
      const GroundTruth gt = row.ground_truth();
      return evaluate_sample_set(row.case_id, load_case(row), gt, options.evaluation);
    } catch (const Error& err) {
      EvaluationRow failed;
      failed.case_id = row.case_id;
      failed.error = err.what();
      return failed;
    }
  });
}

std::string format_evaluation_csv(const std::vector<EvaluationRow>& rows) {
  std::string text =
      csv::join(csv::Record(std::begin(kEvaluationColumns), std::end(kEvaluationColumns)));
  text += '\n';
  for (const auto& r : rows) {
    text += csv::join({r.case_id, csv::fixed6(r.hc_pred_mm), csv::fixed6(r.gt_hc_mm),
                       csv::fixed6(r.abs_diff_mm), csv::fixed6(r.dice),
                       csv::fixed6(r.hausdorff_mm), csv::fixed6(r.lb_mm), csv::fixed6(r.ub_mm),
                       bool_field(r.in_range), csv::fixed6(r.h1), csv::fixed6(r.h2),
                       csv::fixed6(r.h3), csv::fixed6(r.h4), std::to_string(r.n_samples),
                       std::to_string(r.n_failed), r.fallback_used ? "1" : "0", r.error});
    text += '\n';
  }
  return text;
}

void write_evaluation_csv(const std::vector<EvaluationRow>& rows,
                          const std::filesystem::path& path) {
  write_text(format_evaluation_csv(rows), path);
}

std::vector<EvaluationRow> read_evaluation_csv(const std::filesystem::path& path) {
  const auto records = csv::read_file(path);
  if (records.empty()) throw Error(ErrorCode::EmptyCohort, "'" + path.string() + "' is empty");
  const csv::Columns cols(records.front());
  const auto c_id = cols.require("case_id");
  const auto col = [&](std::string_view name) { return cols.find(name); };

  std::vector<EvaluationRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    EvaluationRow r;
    r.case_id = c_id < rec.size() ? rec[c_id] : std::string();
    r.hc_pred_mm = opt_number(rec, col("hc_pred_mm"), "hc_pred_mm");
    r.gt_hc_mm = opt_number(rec, col("gt_hc_mm"), "gt_hc_mm");
    r.abs_diff_mm = opt_number(rec, col("abs_diff_mm"), "abs_diff_mm");
    r.dice = opt_number(rec, col("dice"), "dice");
    r.hausdorff_mm = opt_number(rec, col("hausdorff_mm"), "hausdorff_mm");
    r.lb_mm = opt_number(rec, col("lb_mm"), "lb_mm");
    r.ub_mm = opt_number(rec, col("ub_mm"), "ub_mm");
    if (const auto v = opt_number(rec, col("in_range"), "in_range")) r.in_range = *v != 0.0;
    r.h1 = opt_number(rec, col("h1"), "h1");
    r.h2 = opt_number(rec, col("h2"), "h2");
    r.h3 = opt_number(rec, col("h3"), "h3");
    r.h4 = opt_number(rec, col("h4"), "h4");
    r.n_samples = static_cast<std::size_t>(opt_number(rec, col("n_samples"), "n_samples").value_or(0));
    r.n_failed = static_cast<std::size_t>(opt_number(rec, col("n_failed"), "n_failed").value_or(0));
    r.fallback_used = opt_number(rec, col("fallback_used"), "fallback_used").value_or(0) != 0.0;
    if (const auto e = col("error"); e && *e < rec.size()) r.error = rec[*e];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SweepRow> run_sweep(const std::filesystem::path& evaluation_csv, ScoreName score,
                                std::size_t steps) {
  const auto all = read_evaluation_csv(evaluation_csv);
  std::vector<EvaluationRow> usable;
  for (const auto& r : all) {
    if (r.ok()) usable.push_back(r);
  }
  if (usable.empty()) throw Error(ErrorCode::EmptyCohort, "no successful cases to sweep");
  return sweep(usable, score, steps);
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string text = csv::join(csv::Record(std::begin(kSweepColumns), std::end(kSweepColumns)));
  text += '\n';
  for (const auto& r : rows) {
    text += csv::join({std::string(to_string(r.score)), csv::fixed6(r.threshold),
                       std::to_string(r.n_rejected), std::to_string(r.n_accepted),
                       csv::fixed6(r.mean_abs_diff_mm), csv::fixed6(r.mean_dice),
                       csv::fixed6(r.mean_hausdorff_mm), csv::fixed6(r.pct_in_range)});
    text += '\n';
  }
  return text;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  write_text(format_sweep_csv(rows), path);
}

std::string format_summary(const EvaluationSummary& s) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  auto line = [&](const char* label, const std::optional<MeanStd>& v) {
    os << label;
    if (v) {
      os << csv::fixed6(v->mean) << " +- " << csv::fixed6(v->std) << " (n=" << v->count << ")";
    } else {
      os << "n/a";
    }
    os << '\n';
  };
  os << "cases: " << s.n_cases << " (" << s.n_failed << " failed)\n";
  line("abs_diff_mm:  ", s.abs_diff_mm);
  line("dice:         ", s.dice);
  line("hausdorff_mm: ", s.hausdorff_mm);
  os << "pct_in_range: " << (s.pct_in_range ? csv::fixed6(*s.pct_in_range) : std::string("n/a"))
     << '\n';
  return os.str();
}

}  // namespace hcconf
