#include "hcconf/manifest.hpp"

#include <fstream>

#include "hcconf/csv.hpp"
#include "hcconf/error.hpp"

namespace hcconf {

namespace {

double number_field(const csv::Record& rec, std::size_t col, const char* name, std::size_t line) {
  const std::string& raw = col < rec.size() ? rec[col] : std::string();
  const auto v = csv::parse_double(raw);
  if (!v) {
    throw Error(ErrorCode::BadNumber, std::string(name) + " = '" + raw + "' on line " +
                                          std::to_string(line));
  }
  return *v;
}

}  // namespace

GroundTruth ManifestRow::ground_truth() const {
  return GroundTruth::from_ellipse(Ellipse::make(gt_cx, gt_cy, gt_a, gt_b, gt_theta),
                                   PixelScale(pixel_size_mm));
}

std::vector<ManifestRow> parse_manifest(const std::filesystem::path& path) {
  const auto records = csv::read_file(path);
  if (records.empty()) throw Error(ErrorCode::EmptyManifest, "'" + path.string() + "' is empty");
  const csv::Columns cols(records.front());
  const auto c_id = cols.require("case_id");
  const auto c_px = cols.require("pixel_size_mm");
  const auto c_cx = cols.require("gt_cx");
  const auto c_cy = cols.require("gt_cy");
  const auto c_a = cols.require("gt_a");
  const auto c_b = cols.require("gt_b");
  const auto c_th = cols.require("gt_theta");
  const auto c_masks = cols.require("masks_dir");
  const auto c_soft = cols.find("soft_dir");

  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path dir(p);
    return dir.is_absolute() ? dir : base / dir;
  };

  std::vector<ManifestRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    const std::size_t line = i + 1;
    ManifestRow row;
    row.case_id = c_id < rec.size() ? rec[c_id] : std::string();
    row.pixel_size_mm = number_field(rec, c_px, "pixel_size_mm", line);
    row.gt_cx = number_field(rec, c_cx, "gt_cx", line);
    row.gt_cy = number_field(rec, c_cy, "gt_cy", line);
    row.gt_a = number_field(rec, c_a, "gt_a", line);
    row.gt_b = number_field(rec, c_b, "gt_b", line);
    row.gt_theta = wrap_orientation(number_field(rec, c_th, "gt_theta", line));
    const std::string masks = c_masks < rec.size() ? rec[c_masks] : std::string();
    if (masks.empty()) {
      throw Error(ErrorCode::MissingColumn, "masks_dir empty on line " + std::to_string(line));
    }
    row.masks_dir = resolve(masks);
    if (c_soft && *c_soft < rec.size() && !rec[*c_soft].empty()) {
      row.soft_dir = resolve(rec[*c_soft]);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyManifest, "'" + path.string() + "' has no cases");
  return rows;
}

void write_manifest(const std::vector<ManifestRow>& rows, const std::filesystem::path& path) {
  const auto base = path.parent_path();
  auto relative = [&](const std::filesystem::path& p) {
    const auto rel = p.lexically_relative(base);
    const bool inside = !rel.empty() && *rel.begin() != "..";
    return (inside ? rel : p).generic_string();
  };

  std::string text = csv::join(csv::Record(std::begin(kManifestColumns), std::end(kManifestColumns)));
  text += '\n';
  for (const auto& r : rows) {
    text += csv::join({r.case_id, csv::exact(r.pixel_size_mm), csv::exact(r.gt_cx),
                       csv::exact(r.gt_cy), csv::exact(r.gt_a), csv::exact(r.gt_b),
                       csv::exact(r.gt_theta), relative(r.masks_dir),
                       r.soft_dir ? relative(*r.soft_dir) : std::string()});
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

}  // namespace hcconf
