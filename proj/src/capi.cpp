#include "qmetro.h"

#include <fstream>
#include <new>
#include <string>

#include "qmetro/curve.hpp"
#include "qmetro/errors.hpp"
#include "qmetro/run.hpp"

struct qm_run {
  qmetro::RunSpec spec;
  qmetro::CurveData curve;
  bool executed = false;
  std::string error;
  std::string version;
};

namespace {

template <typename Fn>
int with_errors(qm_run* run, Fn&& fn) {
  try {
    run->error.clear();
    return fn();
  } catch (const qmetro::ValidationError& e) {
    run->error = e.what();
    return QM_ERR_VALIDATION;
  } catch (const qmetro::NumericError& e) {
    run->error = e.what();
    return QM_ERR_NUMERIC;
  } catch (const std::exception& e) {
    run->error = e.what();
    return QM_ERR_NUMERIC;
  }
}

}  // namespace

extern "C" {

const char* qm_version(void) {
  static const std::string v = qmetro::version_string();
  return v.c_str();
}

qm_run* qm_run_new(const char* subcommand) {
  if (subcommand == nullptr) return nullptr;
  const auto& names = qmetro::subcommand_names();
  bool known = false;
  for (const auto& n : names) known = known || n == subcommand;
  if (!known) return nullptr;
  auto* run = new (std::nothrow) qm_run;
  if (run) run->spec.subcommand = subcommand;
  return run;
}

void qm_run_free(qm_run* run) { delete run; }

long qm_subcommand_count(void) {
  return static_cast<long>(qmetro::subcommand_names().size());
}

const char* qm_subcommand_name(long index) {
  const auto& names = qmetro::subcommand_names();
  if (index < 0 || index >= static_cast<long>(names.size())) return nullptr;
  return names[static_cast<size_t>(index)].c_str();
}

int qm_run_set(qm_run* run, const char* key, const char* value) {
  if (!run || !key || !value) return QM_ERR_VALIDATION;
  run->spec.params[key] = value;
  return QM_OK;
}

int qm_run_load_config(qm_run* run, const char* path) {
  if (!run || !path) return QM_ERR_VALIDATION;
  return with_errors(run, [&]() {
    std::ifstream f(path);
    if (!f) {
      run->error = std::string("cannot open config file ") + path;
      return QM_ERR_IO;
    }
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const auto last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      const auto eq = line.find('=');
      if (eq == std::string::npos || eq == 0)
        throw qmetro::ValidationError("config line " + std::to_string(lineno) +
                                      ": expected key=value");
      auto strip = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      const std::string key = strip(line.substr(0, eq));
      const std::string value = strip(line.substr(eq + 1));
      if (key.empty() || value.empty())
        throw qmetro::ValidationError("config line " + std::to_string(lineno) +
                                      ": empty key or value");
      // flags set later override the file, so only fill missing keys
      run->spec.params.emplace(key, value);
    }
    return QM_OK;
  });
}

int qm_run_execute(qm_run* run, const char* output_base) {
  if (!run) return QM_ERR_VALIDATION;
  return with_errors(run, [&]() {
    run->curve = qmetro::run_subcommand(run->spec);
    run->executed = true;
    if (output_base != nullptr) {
      try {
        qmetro::write_outputs(run->curve, output_base);
      } catch (const std::exception& e) {
        run->error = e.what();
        return QM_ERR_IO;
      }
    }
    return QM_OK;
  });
}

const char* qm_run_error(const qm_run* run) {
  return run ? run->error.c_str() : "null run handle";
}

long qm_run_row_count(const qm_run* run) {
  return run && run->executed ? static_cast<long>(run->curve.rows.size()) : -1;
}

int qm_run_row(const qm_run* run, long index, double* x, double* y, double* yerr) {
  if (!run || !run->executed) return QM_ERR_VALIDATION;
  if (index < 0 || index >= static_cast<long>(run->curve.rows.size()))
    return QM_ERR_VALIDATION;
  const auto& row = run->curve.rows[static_cast<size_t>(index)];
  if (x) *x = row[0];
  if (y) *y = row[1];
  if (yerr) *yerr = run->curve.has_yerr ? row[2] : 0.0;
  return QM_OK;
}

int qm_run_note_count(const qm_run* run) {
  return run && run->executed ? static_cast<int>(run->curve.notes.size()) : -1;
}

const char* qm_run_note(const qm_run* run, int index) {
  if (!run || !run->executed || index < 0 ||
      index >= static_cast<int>(run->curve.notes.size()))
    return nullptr;
  return run->curve.notes[static_cast<size_t>(index)].c_str();
}

long qm_figure_count(void) {
  return static_cast<long>(qmetro::figure_table().size());
}

int qm_figure_entry(long index, const char** subcommand, const char** figure,
                    const char** description) {
  const auto& table = qmetro::figure_table();
  if (index < 0 || index >= static_cast<long>(table.size())) return QM_ERR_VALIDATION;
  const auto& e = table[static_cast<size_t>(index)];
  if (subcommand) *subcommand = e.subcommand.c_str();
  if (figure) *figure = e.figure.c_str();
  if (description) *description = e.description.c_str();
  return QM_OK;
}

}  // extern "C"
