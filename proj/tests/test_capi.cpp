#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>

#include "pcstab.h"

using nlohmann::json;

namespace {

struct CloudDeleter {
  void operator()(pcstab_cloud* c) const { pcstab_cloud_free(c); }
};
using CloudPtr = std::unique_ptr<pcstab_cloud, CloudDeleter>;

struct StrDeleter {
  void operator()(char* s) const { pcstab_string_free(s); }
};
using StrPtr = std::unique_ptr<char, StrDeleter>;

const char* kConfig = R"({
  "key": [0.7, 0.2, -0.6, 0.9, -0.8, -0.7],
  "psi": 0.1111111111111111,
  "dimension": 3,
  "permutation": {"source": "explicit",
                  "perm": [9, 12, 7, 11, 8, 10, 6, 1, 4, 3, 2, 5]},
  "compose": "zyx",
  "sphere": {"center": [500, 10, 100], "radius": 100}
})";

}  // namespace

TEST_CASE("cloud create / inspect / free") {
  double coords[] = {1, 2, 3, 4, 5, 6};
  CloudPtr c(pcstab_cloud_create(coords, 2, 3));
  REQUIRE(c != nullptr);
  CHECK(pcstab_cloud_size(c.get()) == 2);
  CHECK(pcstab_cloud_dim(c.get()) == 3);
  double out[3] = {};
  CHECK(pcstab_cloud_get(c.get(), 1, out) == PCSTAB_OK);
  CHECK(out[2] == 6.0);
  CHECK(pcstab_cloud_get(c.get(), 2, out) == PCSTAB_ERR_USAGE);
  CHECK(std::strlen(pcstab_last_error()) > 0);
}

TEST_CASE("cloud create rejects bad arguments") {
  double coords[] = {1, 2};
  CHECK(pcstab_cloud_create(nullptr, 2, 3) == nullptr);
  CHECK(pcstab_cloud_create(coords, 0, 3) == nullptr);
  CHECK(pcstab_cloud_create(coords, 1, 4) == nullptr);
}

TEST_CASE("encrypt then decrypt through the C API") {
  double coords[] = {400, 9, 100, 599, 10, 100};
  CloudPtr plain(pcstab_cloud_create(coords, 2, 3));
  REQUIRE(plain != nullptr);

  pcstab_cloud* cipher_raw = nullptr;
  char* enc_raw = nullptr;
  REQUIRE(pcstab_encrypt(kConfig, plain.get(), &cipher_raw, &enc_raw) ==
          PCSTAB_OK);
  CloudPtr cipher(cipher_raw);
  StrPtr enc(enc_raw);
  CHECK(pcstab_cloud_size(cipher.get()) == 2);
  json result = json::parse(enc.get());
  CHECK(result.at("trace").at("schema") == "pcstab-trace-v1");

  pcstab_cloud* recovered_raw = nullptr;
  char* dec_raw = nullptr;
  REQUIRE(pcstab_decrypt(kConfig, cipher.get(), &recovered_raw, &dec_raw) ==
          PCSTAB_OK);
  CloudPtr recovered(recovered_raw);
  StrPtr dec(dec_raw);
  for (size_t j = 0; j < 2; ++j) {
    double got[3];
    REQUIRE(pcstab_cloud_get(recovered.get(), j, got) == PCSTAB_OK);
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(got[i] - coords[j * 3 + i]) < 1e-6);
  }
}

TEST_CASE("decrypt diagnosis path returns PCSTAB_DIAGNOSIS") {
  const char* cfg = R"({
    "keystream": [[0.3333333333333333, -0.5, 0.25,
                   -0.6666666666666666, 0.8, 0.3333333333333333]],
    "dimension": 2,
    "permutation": {"source": "explicit", "perm": [1, 4, 2, 5, 3, 8, 6, 7]},
    "sphere": {"center": [0, 0], "radius": 1}
  })";
  double coords[] = {0, 0, 0, 0};
  CloudPtr forged(pcstab_cloud_create(coords, 2, 2));
  char* out_raw = nullptr;
  CHECK(pcstab_decrypt(cfg, forged.get(), nullptr, &out_raw) ==
        PCSTAB_DIAGNOSIS);
  StrPtr out(out_raw);
  json res = json::parse(out.get());
  CHECK(res.at("ok") == false);
  CHECK(res.at("outcome").at("classification") == "inconsistent");
}

TEST_CASE("error codes: usage vs parse") {
  double coords[] = {1, 2, 3};
  CloudPtr c(pcstab_cloud_create(coords, 1, 3));
  char* out = nullptr;

  CHECK(pcstab_encrypt("{\"bogus_key\": 1}", c.get(), nullptr, &out) ==
        PCSTAB_ERR_USAGE);
  CHECK(std::string(pcstab_last_error()).find("bogus_key") !=
        std::string::npos);

  CHECK(pcstab_encrypt("{not json", c.get(), nullptr, &out) ==
        PCSTAB_ERR_PARSE);

  CHECK(pcstab_encrypt(kConfig, nullptr, nullptr, &out) == PCSTAB_ERR_USAGE);
}

TEST_CASE("analyze through the C API") {
  double pc[] = {0.1, 0.2, 0.1, -0.2, 0.0, 0.3};
  CloudPtr cipher(pcstab_cloud_create(pc, 2, 3));
  const char* cfg =
      R"({"psi": 0.1111111111111111,
          "sphere": {"center": [0, 0, 0], "radius": 1}})";
  char* out_raw = nullptr;
  REQUIRE(pcstab_analyze(cfg, cipher.get(), nullptr, &out_raw) == PCSTAB_OK);
  StrPtr out(out_raw);
  json res = json::parse(out.get());
  CHECK(res.at("report").at("geometric") == true);
  CHECK(res.at("bounds").at("lemma1").get<double>() ==
        doctest::Approx(20.0 / 3.0));
}

TEST_CASE("verify through the C API") {
  const char* cfg =
      R"({"trials": 100, "seed": 9, "census": {"trials_per_bucket": 25}})";
  char* out_raw = nullptr;
  CHECK(pcstab_verify(cfg, &out_raw) == PCSTAB_OK);
  StrPtr out(out_raw);
  json res = json::parse(out.get());
  CHECK(res.at("violation") == false);
}

TEST_CASE("reproduce and plotdata through the C API") {
  char* rep_raw = nullptr;
  REQUIRE(pcstab_reproduce("example2", nullptr, &rep_raw) == PCSTAB_OK);
  StrPtr rep(rep_raw);
  json res = json::parse(rep.get());
  CHECK(res.at("report").at("geometric") == false);

  std::string trace = res.at("trace").dump();
  char* plot_raw = nullptr;
  REQUIRE(pcstab_plotdata(trace.c_str(), &plot_raw) == PCSTAB_OK);
  StrPtr plot(plot_raw);
  json pj = json::parse(plot.get());
  CHECK(pj.at("spheres").size() == 2);

  CHECK(pcstab_reproduce("example9", nullptr, &plot_raw) == PCSTAB_ERR_USAGE);
}
