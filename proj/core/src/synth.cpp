#include "hcconf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "hcconf/csv.hpp"
#include "hcconf/error.hpp"
#include "hcconf/manifest.hpp"
#include "hcconf/pgm.hpp"

namespace hcconf {

namespace {

constexpr std::uint64_t kTruthLane = 0;
constexpr std::uint64_t kSampleLane = 1;

// Smallest axis a perturbed sample may have, in pixels.
constexpr double kMinSampleAxis = 1.0;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, std::string("synth config: ") + what);
}

// Centre range for one coordinate: the central third of the grid, narrowed
// so the ellipse's bounding box keeps `margin` pixels from the edges.
std::pair<double, double> centre_range(std::size_t extent, double half_box, double margin) {
  const double n = static_cast<double>(extent);
  const double lo = std::max(n / 3.0, half_box + margin);
  const double hi = std::min(2.0 * n / 3.0, n - 1.0 - half_box - margin);
  if (lo <= hi) return {lo, hi};
  const double mid = 0.5 * (n - 1.0);
  return {mid, mid};
}

std::string sample_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03zu.pgm", i);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  require(width > 0 && height > 0, "grid must be non-empty");
  require(scale_min_mm > 0.0 && scale_min_mm <= scale_max_mm, "scale range");
  require(a_min > 0.0 && a_min <= a_max, "semi-major axis range");
  require(ratio_min >= 1.0 && ratio_min <= ratio_max, "axis ratio range");
  require(edge_margin >= 0.0, "edge margin");
  require(sigma_center >= 0.0 && sigma_axes >= 0.0 && sigma_theta >= 0.0, "sigmas must be >= 0");
  require(multiplier_min > 0.0 && multiplier_min <= multiplier_max, "sigma multiplier range");
  require(sector_dropout_deg >= 0.0 && sector_dropout_deg < 360.0, "sector dropout width");
  require(!tau || *tau > 0.0, "tau must be positive");
  const double fit = 2.0 * (a_max + edge_margin);
  require(fit <= static_cast<double>(std::min(width, height)) - 1.0,
          "grid too small for the largest ground-truth ellipse");
}

std::string case_id_for(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "case_%04zu", index);
  return buf;
}

SynthCase gen_case(std::uint64_t seed, std::size_t index, const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(substream_seed(seed, index, kTruthLane));
  const double scale = rng.uniform(cfg.scale_min_mm, cfg.scale_max_mm);
  const double a = rng.uniform(cfg.a_min, cfg.a_max);
  const double ratio = rng.uniform(cfg.ratio_min, cfg.ratio_max);
  const double b = a / ratio;
  const double theta = rng.uniform(0.0, kPi);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double half_x = std::sqrt(a * a * c * c + b * b * s * s);
  const double half_y = std::sqrt(a * a * s * s + b * b * c * c);
  const auto [x_lo, x_hi] = centre_range(cfg.width, half_x, cfg.edge_margin);
  const auto [y_lo, y_hi] = centre_range(cfg.height, half_y, cfg.edge_margin);
  const double cx = rng.uniform(x_lo, x_hi);
  const double cy = rng.uniform(y_lo, y_hi);
  const double multiplier = rng.log_uniform(cfg.multiplier_min, cfg.multiplier_max);

  return SynthCase{case_id_for(index),
                   GroundTruth::from_ellipse(Ellipse::make(cx, cy, a, b, theta), PixelScale(scale)),
                   multiplier};
}

SampleSet sample_predictions(const GroundTruth& gt, double sigma_multiplier,
                             const SynthConfig& cfg, std::size_t n, Rng& rng) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  const Ellipse& e = gt.ellipse;
  const double sc = cfg.sigma_center * sigma_multiplier;
  const double sa = cfg.sigma_axes * sigma_multiplier;
  const double st = cfg.sigma_theta * sigma_multiplier;
  const double sector_width = cfg.sector_dropout_deg * kPi / 180.0;

  std::vector<BinaryMask> masks;
  std::vector<SoftMask> soft;
  std::vector<std::optional<AngularSector>> sectors;
  masks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Fixed draw order per sample so optional features never shift the stream.
    const double dcx = rng.normal();
    const double dcy = rng.normal();
    const double da = rng.normal();
    const double db = rng.normal();
    const double dt = rng.normal();
    const double sector_start = rng.uniform(0.0, 2.0 * kPi);

    const Ellipse sample = Ellipse::make(e.cx() + sc * dcx, e.cy() + sc * dcy,
                                         std::max(kMinSampleAxis, e.a() + sa * da),
                                         std::max(kMinSampleAxis, e.b() + sa * db),
                                         e.theta() + st * dt);
    masks.push_back(rasterize_ellipse(sample, cfg.width, cfg.height));
    if (cfg.tau) soft.push_back(soft_map(sample, *cfg.tau, cfg.width, cfg.height));
    if (sector_width > 0.0) {
      sectors.emplace_back(AngularSector{sector_start, sector_width});
    } else {
      sectors.emplace_back(std::nullopt);
    }
  }
  return SampleSet(std::move(masks), std::move(soft), std::move(sectors));
}

SoftMask soft_map(const Ellipse& e, double tau, std::size_t width, std::size_t height) {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  SoftMask out(width, height);
  const QuadraticForm q(e);
  for (std::size_t row = 0; row < height; ++row) {
    for (std::size_t col = 0; col < width; ++col) {
      const double z = (1.0 - q(static_cast<double>(col), static_cast<double>(row))) / tau;
      out.at(col, row) = 1.0 / (1.0 + std::exp(-z));
    }
  }
  return out;
}

CaseRecord make_case(const SynthConfig& cfg, std::size_t index, std::size_t n_samples) {
  SynthCase c = gen_case(cfg.seed, index, cfg);
  Rng rng(substream_seed(cfg.seed, index, kSampleLane));
  SampleSet samples = sample_predictions(c.gt, c.sigma_multiplier, cfg, n_samples, rng);
  return CaseRecord{std::move(c.case_id), c.gt, c.sigma_multiplier, std::move(samples)};
}

std::filesystem::path gen_dataset(const SynthConfig& cfg, std::size_t n_cases,
                                  std::size_t n_samples, const std::filesystem::path& out_dir) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<ManifestRow> manifest;
  for (std::size_t i = 0; i < n_cases; ++i) {
    const CaseRecord rec = make_case(cfg, i, n_samples);
    const auto case_dir = out_dir / rec.case_id;
    const auto masks_dir = case_dir / "masks";
    std::filesystem::create_directories(masks_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create '" + masks_dir.string() + "'");

    std::string sectors = "sample,start_rad,width_rad\n";
    bool any_sector = false;
    for (std::size_t k = 0; k < rec.samples.size(); ++k) {
      write_pgm(rec.samples.masks()[k], masks_dir / sample_name(k));
      if (const auto& sec = rec.samples.excluded(k)) {
        sectors += csv::join({std::to_string(k), csv::exact(sec->start), csv::exact(sec->width)});
        sectors += '\n';
        any_sector = true;
      }
    }
    if (any_sector) {
      std::ofstream out(masks_dir / "sectors.csv", std::ios::binary | std::ios::trunc);
      out << sectors;
      if (!out) throw Error(ErrorCode::IoError, "failed writing sectors.csv");
    }

    ManifestRow row;
    row.case_id = rec.case_id;
    row.pixel_size_mm = rec.gt.scale.mm_per_pixel;
    row.gt_cx = rec.gt.ellipse.cx();
    row.gt_cy = rec.gt.ellipse.cy();
    row.gt_a = rec.gt.ellipse.a();
    row.gt_b = rec.gt.ellipse.b();
    row.gt_theta = rec.gt.ellipse.theta();
    row.masks_dir = masks_dir;
    if (rec.samples.has_soft()) {
      const auto soft_dir = case_dir / "soft";
      std::filesystem::create_directories(soft_dir, ec);
      if (ec) throw Error(ErrorCode::IoError, "cannot create '" + soft_dir.string() + "'");
      for (std::size_t k = 0; k < rec.samples.size(); ++k) {
        write_pgm(rec.samples.soft()[k], soft_dir / sample_name(k));
      }
      row.soft_dir = soft_dir;
    }
    manifest.push_back(std::move(row));
  }
  const auto manifest_path = out_dir / "manifest.csv";
  write_manifest(manifest, manifest_path);
  return manifest_path;
}

}  // namespace hcconf
