#ifndef QMETRO_CURVE_HPP
#define QMETRO_CURVE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qmetro {

// Uniform output of every figure-reproduction run: a curve plus the
// provenance needed to regenerate it byte-for-byte.
struct CurveData {
  struct Column {
    std::string label;
    std::string unit;
  };

  Column x, y, yerr;
  bool has_yerr = false;
  std::vector<std::array<double, 3>> rows;  // x, y, yerr (0 when unused)

  std::string subcommand;
  std::string figure;
  bool seeded = false;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<std::pair<std::string, std::string>> params;  // echo, sorted
  std::vector<std::string> notes;

  void push(double xv, double yv, double ev = 0.0) { rows.push_back({xv, yv, ev}); }
  void check() const;  // finite values, monotone x
};

std::string version_string();

// RFC-4180, header row, '.' decimal separator, shortest round-trip doubles.
void write_csv(const CurveData& curve, const std::string& path);
std::string csv_string(const CurveData& curve);

// Ordered-key JSON sidecar with the provenance block.
void write_meta_json(const CurveData& curve, const std::string& path);
std::string meta_json_string(const CurveData& curve);

}  // namespace qmetro

#endif
