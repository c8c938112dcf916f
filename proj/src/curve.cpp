#include "qmetro/curve.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "qmetro/errors.hpp"

#ifndef QMETRO_VERSION
#define QMETRO_VERSION "0.0.0-dev"
#endif

namespace qmetro {

std::string version_string() { return QMETRO_VERSION; }

void CurveData::check() const {
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    if (!std::isfinite(row[0]) || !std::isfinite(row[1]) ||
        (has_yerr && !std::isfinite(row[2])))
      throw NumericError("CurveData: non-finite value in row");
    if (!(row[0] > prev)) throw NumericError("CurveData: x grid not strictly increasing");
    prev = row[0];
  }
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string column_header(const CurveData::Column& c) {
  std::string h = c.label;
  if (!c.unit.empty()) h += " [" + c.unit + "]";
  // RFC-4180 quoting is never needed: labels carry no commas or quotes
  return h;
}

}  // namespace

std::string csv_string(const CurveData& curve) {
  curve.check();
  std::string out = column_header(curve.x) + "," + column_header(curve.y);
  if (curve.has_yerr) out += "," + column_header(curve.yerr);
  out += "\r\n";
  for (const auto& row : curve.rows) {
    out += format_double(row[0]) + "," + format_double(row[1]);
    if (curve.has_yerr) out += "," + format_double(row[2]);
    out += "\r\n";
  }
  return out;
}

void write_csv(const CurveData& curve, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw NumericError("cannot open " + path + " for writing");
  f << csv_string(curve);
}

std::string meta_json_string(const CurveData& curve) {
  nlohmann::ordered_json j;
  j["tool"] = "qmetro";
  j["version"] = version_string();
  j["subcommand"] = curve.subcommand;
  j["figure"] = curve.figure;
  if (curve.seeded) j["seed"] = curve.seed;
  j["threads"] = curve.threads;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : curve.params) params[k] = v;
  j["params"] = params;
  nlohmann::ordered_json cols = nlohmann::ordered_json::object();
  cols["x"] = {{"label", curve.x.label}, {"unit", curve.x.unit}};
  cols["y"] = {{"label", curve.y.label}, {"unit", curve.y.unit}};
  if (curve.has_yerr)
    cols["yerr"] = {{"label", curve.yerr.label}, {"unit", curve.yerr.unit}};
  j["columns"] = cols;
  j["rows"] = curve.rows.size();
  j["notes"] = curve.notes;
  return j.dump(2) + "\n";
}

void write_meta_json(const CurveData& curve, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw NumericError("cannot open " + path + " for writing");
  f << meta_json_string(curve);
}

}  // namespace qmetro
