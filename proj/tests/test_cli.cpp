#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "qmetro.h"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QMETRO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("c api: run lifecycle and row access") {
  qm_run* run = qm_run_new("nrf");
  REQUIRE(run != nullptr);
  CHECK(qm_run_set(run, "points", "11") == QM_OK);
  CHECK(qm_run_set(run, "lambda", "1.5") == QM_OK);
  CHECK(qm_run_execute(run, nullptr) == QM_OK);
  CHECK(qm_run_row_count(run) == 11);
  double x = 0, y = 0, e = 0;
  CHECK(qm_run_row(run, 0, &x, &y, &e) == QM_OK);
  CHECK(x == doctest::Approx(0.5));
  CHECK(qm_run_row(run, 99, &x, &y, &e) == QM_ERR_VALIDATION);
  qm_run_free(run);

  CHECK(qm_run_new("no-such-command") == nullptr);
}

TEST_CASE("c api: validation failures carry messages and codes") {
  qm_run* run = qm_run_new("fringes");
  REQUIRE(run != nullptr);
  // missing mandatory seed
  CHECK(qm_run_execute(run, nullptr) == QM_ERR_VALIDATION);
  CHECK(std::string(qm_run_error(run)).find("seed") != std::string::npos);
  // unknown key rejected
  qm_run_set(run, "seed", "1");
  qm_run_set(run, "bogus_knob", "3");
  CHECK(qm_run_execute(run, nullptr) == QM_ERR_VALIDATION);
  CHECK(std::string(qm_run_error(run)).find("bogus_knob") != std::string::npos);
  qm_run_free(run);
}

TEST_CASE("c api: figure table is complete and self-consistent") {
  CHECK(qm_figure_count() >= 12);
  bool has_fig12 = false;
  for (long i = 0; i < qm_figure_count(); ++i) {
    const char *sub, *fig, *desc;
    REQUIRE(qm_figure_entry(i, &sub, &fig, &desc) == QM_OK);
    if (std::string(fig) == "fig. 12") has_fig12 = true;
    bool known = false;
    for (long j = 0; j < qm_subcommand_count(); ++j)
      known = known || std::string(qm_subcommand_name(j)) == sub;
    CHECK(known);
  }
  CHECK(has_fig12);
}

TEST_CASE("c api: config file loads and flags override") {
  const std::string path = "/tmp/qmetro_test_config.txt";
  {
    std::ofstream f(path);
    f << "# comment line\n";
    f << "lambda = 2.0\n";
    f << "points=7\n";
  }
  qm_run* run = qm_run_new("nrf");
  REQUIRE(run != nullptr);
  CHECK(qm_run_load_config(run, path.c_str()) == QM_OK);
  qm_run_set(run, "lambda", "3.0");  // override
  CHECK(qm_run_execute(run, nullptr) == QM_OK);
  CHECK(qm_run_row_count(run) == 7);
  qm_run_free(run);

  qm_run* bad = qm_run_new("nrf");
  CHECK(qm_run_load_config(bad, "/nonexistent/file") == QM_ERR_IO);
  qm_run_free(bad);
  std::remove(path.c_str());
}

TEST_CASE("cli: deterministic bytes for seeded reruns") {
  REQUIRE(run_cli("fringes --seed 11 --points 7 --shots 100 -o /tmp/qm_det_a") == 0);
  REQUIRE(run_cli("fringes --seed 11 --points 7 --shots 100 -o /tmp/qm_det_b") == 0);
  CHECK(slurp("/tmp/qm_det_a.csv") == slurp("/tmp/qm_det_b.csv"));
  CHECK(slurp("/tmp/qm_det_a.meta.json") == slurp("/tmp/qm_det_b.meta.json"));
  // different seed must change the bytes
  REQUIRE(run_cli("fringes --seed 12 --points 7 --shots 100 -o /tmp/qm_det_c") == 0);
  CHECK(slurp("/tmp/qm_det_a.csv") != slurp("/tmp/qm_det_c.csv"));
}

TEST_CASE("cli: exit codes") {
  CHECK(run_cli("fringes --points 7 --shots 10 -o /tmp/qm_noseed") == 2);  // no seed
  CHECK(run_cli("nrf --points 5 --tau_min 0.9 --tau_max 0.2 -o /tmp/qm_badgrid") == 2);
  CHECK(run_cli("nrf --points 5 -o /tmp/qm_ok") == 0);
  CHECK(run_cli("list-figures") == 0);
}

TEST_CASE("cli: dashes in flags map to underscores") {
  CHECK(run_cli("nrf --tau-min 0.6 --points 5 -o /tmp/qm_dash") == 0);
}
