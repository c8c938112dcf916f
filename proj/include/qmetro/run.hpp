#ifndef QMETRO_RUN_HPP
#define QMETRO_RUN_HPP

#include <map>
#include <string>
#include <vector>

#include "qmetro/curve.hpp"

namespace qmetro {

// A figure-reproduction request: subcommand plus key=value overrides.
// Unknown keys are rejected; stochastic subcommands require a seed.
struct RunSpec {
  std::string subcommand;
  std::map<std::string, std::string> params;
};

const std::vector<std::string>& subcommand_names();

// Executes the run and returns the curve (no files written).
CurveData run_subcommand(const RunSpec& spec);

// Writes <output_base>.csv and <output_base>.meta.json.
void write_outputs(const CurveData& curve, const std::string& output_base);

struct FigureEntry {
  std::string subcommand;
  std::string figure;
  std::string description;
};
const std::vector<FigureEntry>& figure_table();

}  // namespace qmetro

#endif
