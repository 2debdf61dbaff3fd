#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "qrho/qrho.h"

TEST_CASE("version and status names") {
  CHECK(std::strlen(qrho_version()) > 0);
  CHECK(std::string(qrho_status_name(QRHO_OK)) == "ok");
  CHECK(std::string(qrho_status_name(QRHO_ERR_TIMING)) == "timing");
  CHECK(std::string(qrho_status_name(QRHO_ERR_INVALID_ARGUMENT)) == "invalid_argument");
}

TEST_CASE("errors map to status codes and messages") {
  double out[4];
  CHECK(qrho_airy(2e4, out) == QRHO_ERR_DOMAIN);
  CHECK(std::string(qrho_last_error()).find("airy") != std::string::npos);
  CHECK(qrho_airy(0.0, out) == QRHO_OK);
  CHECK(std::string(qrho_last_error()).empty());
  CHECK(out[0] == doctest::Approx(0.35502805388781724).epsilon(1e-14));
  double h = 0;
  CHECK(qrho_hermite(65, 0.0, &h) == QRHO_ERR_UNSUPPORTED_ORDER);
  CHECK(qrho_hermite(2, 1.0, nullptr) == QRHO_ERR_INVALID_ARGUMENT);
  qrho_params bad{1.0, -1.0, 1.0, 1.0};
  CHECK(qrho_params_validate(&bad) == QRHO_ERR_CONFIGURATION);
  CHECK(std::string(qrho_last_error()).find("omega_in") != std::string::npos);
}

TEST_CASE("error state is per thread") {
  double out[4];
  CHECK(qrho_airy(2e4, out) == QRHO_ERR_DOMAIN);
  std::string other = "unset";
  std::thread t([&] {
    double o[4];
    qrho_airy(1.0, o);
    other = qrho_last_error();
  });
  t.join();
  CHECK(other.empty());
  CHECK(std::string(qrho_last_error()).size() > 0);
}

TEST_CASE("stationary handle") {
  qrho_stationary* d = nullptr;
  REQUIRE(qrho_stationary_create(1.0, 1.0, 0.0, &d) == QRHO_OK);
  size_t n = 0;
  REQUIRE(qrho_stationary_size(d, &n) == QRHO_OK);
  CHECK(n > 100);
  std::vector<double> tb(n), q(n);
  CHECK(qrho_stationary_copy(d, tb.data(), q.data(), n) == QRHO_OK);
  double flux = 0, mass = 0, tail = 0;
  CHECK(qrho_stationary_summary(d, &flux, &mass, &tail) == QRHO_OK);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(flux == doctest::Approx(0.34041416332730177).epsilon(1e-9));
  qrho_stationary_destroy(d);
  qrho_stationary_destroy(nullptr);
  CHECK(qrho_stationary_create(0.0, 1.0, 5.0, &d) == QRHO_ERR_TAIL_MASS);
  CHECK(d == nullptr);
}

TEST_CASE("paths, trajectories and scattering through the C interface") {
  qrho_params p{1.0, 1.0, 1.0, 1.0};
  qrho_profile prof{QRHO_PROFILE_CONSTANT, 1.0, 1.0, 0.0, 0.0};
  qrho_sde_config cfg{};
  REQUIRE(qrho_sde_defaults(&p, &prof, 5, &cfg) == QRHO_OK);
  cfg.n_paths = 3;
  cfg.store_stride = 10;
  qrho_ensemble* e = nullptr;
  REQUIRE(qrho_simulate(&cfg, 0.0, 1.0, 0.0, &e) == QRHO_OK);
  size_t count = 0, n = 0;
  CHECK(qrho_ensemble_count(e, &count) == QRHO_OK);
  CHECK(count == 3);
  CHECK(qrho_path_size(e, 2, &n) == QRHO_OK);
  std::vector<double> t(n), th(n), it(n);
  CHECK(qrho_path_copy(e, 2, t.data(), th.data(), it.data(), n) == QRHO_OK);
  CHECK(t.back() == doctest::Approx(1.0));
  CHECK(qrho_path_size(e, 7, &n) == QRHO_ERR_DOMAIN);
  qrho_ensemble_destroy(e);

  qrho_profile step{QRHO_PROFILE_STEP, 1.0, 3.0, 0.0, 0.0};
  qrho_trajectory* tr = nullptr;
  REQUIRE(qrho_trajectory_create(&step, -10.0, 3.0, 1e-3, &tr) == QRHO_OK);
  double s[8];
  CHECK(qrho_s_elements(tr, &step, 2.0, s) == QRHO_OK);
  CHECK(s[0] * s[0] + s[1] * s[1] == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));
  std::vector<double> re(36), im(36);
  CHECK(qrho_overlap(tr, 1.0, 5, re.data(), im.data()) == QRHO_OK);
  CHECK(re[7] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(qrho_s_elements(tr, &step, -1.0, s) == QRHO_ERR_TIMING);
  qrho_trajectory_destroy(tr);

  double prob = 0, r = 0, i = 0;
  CHECK(qrho_transition(1.0, 0.0, &prob, &r, &i) == QRHO_OK);
  CHECK(prob == doctest::Approx(0.526895265948855).epsilon(1e-8));
}

TEST_CASE("thermo report") {
  qrho_params p{1.0, 1.0, 1.0, 1.0};
  qrho_thermo_report r{};
  REQUIRE(qrho_thermo(&p, &r) == QRHO_OK);
  CHECK(r.lambda == doctest::Approx(1.0));
  CHECK(r.entropy_over_k == doctest::Approx(0.35388013152050128).epsilon(1e-12));
  CHECK(r.entropy_over_k == doctest::Approx(r.internal_energy - r.free_energy).epsilon(1e-12));
  CHECK(r.divergent_vacuum_term == 1);
}
