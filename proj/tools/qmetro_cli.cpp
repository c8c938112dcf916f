// Command-line front end over the qmetro C API: every figure-reproduction
// subcommand writes <out>.csv plus <out>.meta.json.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmetro.h"

namespace {

struct RunArgs {
  std::string out;
  std::string config;
  std::vector<std::string> extras;
};

int execute(const std::string& subcommand, const RunArgs& args) {
  qm_run* run = qm_run_new(subcommand.c_str());
  if (!run) {
    std::fprintf(stderr, "qmetro: unknown subcommand '%s'\n", subcommand.c_str());
    return QM_ERR_VALIDATION;
  }
  int rc = QM_OK;
  if (!args.config.empty()) {
    rc = qm_run_load_config(run, args.config.c_str());
    if (rc != QM_OK) {
      std::fprintf(stderr, "qmetro: %s\n", qm_run_error(run));
      qm_run_free(run);
      return rc;
    }
  }
  // remaining tokens: --key value pairs overriding the config file
  for (size_t i = 0; i < args.extras.size(); ++i) {
    std::string key = args.extras[i];
    if (key.rfind("--", 0) != 0 || key.size() < 3 || i + 1 >= args.extras.size()) {
      std::fprintf(stderr, "qmetro: expected --key value pairs, got '%s'\n", key.c_str());
      qm_run_free(run);
      return QM_ERR_VALIDATION;
    }
    key = key.substr(2);
    for (auto& ch : key)
      if (ch == '-') ch = '_';
    qm_run_set(run, key.c_str(), args.extras[++i].c_str());
  }
  const std::string base = args.out.empty() ? subcommand : args.out;
  rc = qm_run_execute(run, base.c_str());
  if (rc != QM_OK) {
    std::fprintf(stderr, "qmetro: %s\n", qm_run_error(run));
    qm_run_free(run);
    return rc;
  }
  std::printf("wrote %s.csv and %s.meta.json (%ld rows)\n", base.c_str(), base.c_str(),
              qm_run_row_count(run));
  for (int i = 0; i < qm_run_note_count(run); ++i)
    std::printf("note: %s\n", qm_run_note(run, i));
  qm_run_free(run);
  return QM_OK;
}

int list_figures() {
  std::printf("%-16s  %-8s  %s\n", "subcommand", "figure", "description");
  for (long i = 0; i < qm_figure_count(); ++i) {
    const char *sub, *fig, *desc;
    if (qm_figure_entry(i, &sub, &fig, &desc) == QM_OK)
      std::printf("%-16s  %-8s  %s\n", sub, fig, desc);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmetro: Gaussian quantum-metrology figure reproduction"};
  app.set_version_flag("--version", std::string(qm_version()));
  app.require_subcommand(1);

  std::vector<std::pair<std::string, RunArgs>> pending;
  for (long i = 0; i < qm_subcommand_count(); ++i) {
    const std::string name = qm_subcommand_name(i);
    auto* sub = app.add_subcommand(name, "write the " + name + " curve");
    auto args = std::make_shared<RunArgs>();
    sub->add_option("-o,--out", args->out, "output base path (default: subcommand name)");
    sub->add_option("-c,--config", args->config, "key=value config file");
    sub->allow_extras();
    sub->callback([name, args, sub, &pending]() {
      args->extras = sub->remaining();
      pending.push_back({name, *args});
    });
  }
  auto* lf = app.add_subcommand("list-figures", "print the subcommand-to-figure table");
  bool do_list = false;
  lf->callback([&do_list]() { do_list = true; });

  CLI11_PARSE(app, argc, argv);
  if (do_list) return list_figures();
  for (const auto& [name, args] : pending) {
    const int rc = execute(name, args);
    if (rc != QM_OK) return rc;
  }
  return 0;
}
