// Command-line front end; talks to the core exclusively through the C API.
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pcstab.h"

using json = nlohmann::json;

namespace {

struct Flags {
  std::string config_file;
  std::string input, output, trace_file, plain_file, diagnosis;
  std::vector<double> key;
  std::optional<int> degree;
  std::optional<double> psi;
  std::string variant, pool_order, perm_direction, handedness, compose;
  std::optional<int> rounds, dimension;
  std::string permutation;  // "derived" or a file of 1-based indices
  std::vector<double> sphere_center;
  std::optional<double> sphere_radius;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::string center_mode;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_file, "JSON config file (flags win)");
  cmd->add_option("--key", f.key, "chaotic key, 6 values in [-1,1]")
      ->expected(6);
  cmd->add_option("--degree", f.degree, "Chebyshev map degree (>= 3)");
  cmd->add_option("--psi", f.psi, "scaling factor psi > 0");
  cmd->add_option("--variant", f.variant, "original|modified")
      ->check(CLI::IsMember({"original", "modified"}));
  cmd->add_option("--rounds", f.rounds, "encryption rounds (1 or 2)")
      ->check(CLI::Range(1, 2));
  cmd->add_option("--dimension", f.dimension, "point dimension (2 or 3)")
      ->check(CLI::Range(2, 3));
  cmd->add_option("--permutation", f.permutation,
                  "'derived' or a file of 1-based pool indices");
  cmd->add_option("--pool-order", f.pool_order, "plain-first|anchors-first")
      ->check(CLI::IsMember({"plain-first", "anchors-first"}));
  cmd->add_option("--perm-direction", f.perm_direction, "forward|inverse")
      ->check(CLI::IsMember({"forward", "inverse"}));
  cmd->add_option("--handedness", f.handedness, "ccw|cw")
      ->check(CLI::IsMember({"ccw", "cw"}));
  cmd->add_option("--compose", f.compose, "rotation composition order, xyz|zyx")
      ->check(CLI::IsMember({"xyz", "zyx"}));
  cmd->add_option("--sphere-center", f.sphere_center,
                  "plaintext sphere center override")
      ->expected(2, 3);
  cmd->add_option("--sphere-radius", f.sphere_radius,
                  "plaintext sphere radius override");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--trials", f.trials, "Monte Carlo trial count");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<std::size_t> read_permutation_file(const std::string& path) {
  std::string text = read_file(path);
  for (char& c : text)
    if (c == ',') c = ' ';
  std::stringstream ss(text);
  std::vector<std::size_t> perm;
  std::size_t v;
  while (ss >> v) perm.push_back(v);
  if (perm.empty()) throw std::runtime_error("empty permutation file " + path);
  return perm;
}

// precedence: CLI flags > config file > defaults
json build_config(const Flags& f) {
  json cfg = json::object();
  if (!f.config_file.empty()) cfg = json::parse(read_file(f.config_file));
  cfg["schema"] = "pcstab-config-v1";
  if (!f.key.empty()) cfg["key"] = f.key;
  if (f.degree) cfg["degree"] = *f.degree;
  if (f.psi) cfg["psi"] = *f.psi;
  if (!f.variant.empty()) cfg["variant"] = f.variant;
  if (f.rounds) cfg["rounds"] = *f.rounds;
  if (f.dimension) cfg["dimension"] = *f.dimension;
  if (!f.permutation.empty()) {
    if (f.permutation == "derived") {
      cfg["permutation"] = {{"source", "derived"}};
    } else {
      cfg["permutation"] = {{"source", "explicit"},
                            {"perm", read_permutation_file(f.permutation)}};
    }
  }
  if (!f.pool_order.empty()) cfg["pool_order"] = f.pool_order;
  if (!f.perm_direction.empty()) cfg["perm_direction"] = f.perm_direction;
  if (!f.handedness.empty()) cfg["handedness"] = f.handedness;
  if (!f.compose.empty()) cfg["compose"] = f.compose;
  if (!f.sphere_center.empty() || f.sphere_radius) {
    json sphere = cfg.value("sphere", json::object());
    if (!f.sphere_center.empty()) sphere["center"] = f.sphere_center;
    if (f.sphere_radius) sphere["radius"] = *f.sphere_radius;
    cfg["sphere"] = sphere;
  }
  if (f.trials) cfg["trials"] = *f.trials;
  if (f.seed) cfg["seed"] = *f.seed;
  if (!f.center_mode.empty()) cfg["center_mode"] = f.center_mode;
  return cfg;
}

struct CloudHandle {
  pcstab_cloud* c{nullptr};
  ~CloudHandle() { pcstab_cloud_free(c); }
};

struct StringHandle {
  char* s{nullptr};
  ~StringHandle() { pcstab_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

int fail(int code) {
  std::cerr << "error: " << pcstab_last_error() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pcstab: point-cloud permutation/rotation cipher and "
               "geometric-stability analysis"};
  app.require_subcommand(1);

  Flags f;
  std::string example;

  auto* enc = app.add_subcommand("encrypt", "encrypt a point cloud");
  enc->add_option("--input", f.input, "plaintext cloud (CSV or ASCII PLY)")
      ->required();
  enc->add_option("--output", f.output, "ciphertext CSV")->required();
  enc->add_option("--trace", f.trace_file, "write the stage trace JSON here");
  add_common_flags(enc, f);

  auto* dec = app.add_subcommand("decrypt", "decrypt or diagnose a ciphertext");
  dec->add_option("--input", f.input, "ciphertext cloud");
  dec->add_option("--output", f.output, "recovered cloud CSV");
  dec->add_option("--trace", f.trace_file, "decrypt from a recorded trace");
  dec->add_option("--diagnosis", f.diagnosis,
                  "where to write the diagnosis JSON on failure");
  add_common_flags(dec, f);

  auto* ana = app.add_subcommand("analyze", "stability verdicts and bounds");
  ana->add_option("--input", f.input, "ciphertext cloud")->required();
  ana->add_option("--plain", f.plain_file,
                  "plaintext cloud (for the sphere, if no override)");
  ana->add_option("--output", f.output, "report JSON (stdout if omitted)");
  ana->add_option("--center-mode", f.center_mode, "meb|centroid")
      ->check(CLI::IsMember({"meb", "centroid"}));
  add_common_flags(ana, f);

  auto* ver = app.add_subcommand("verify", "Monte Carlo bound verification");
  ver->add_option("--output", f.output, "summary JSON (stdout if omitted)");
  add_common_flags(ver, f);

  auto* plot = app.add_subcommand("plot-data", "emit a JSON plot bundle");
  plot->add_option("--trace", f.trace_file, "trace JSON from encrypt")
      ->required();
  plot->add_option("--output", f.output, "bundle JSON (stdout if omitted)");

  auto* rep = app.add_subcommand("reproduce", "re-run a published counterexample");
  rep->add_option("example", example, "example1|example2")
      ->required()
      ->check(CLI::IsMember({"example1", "example2"}));
  rep->add_option("--output", f.output, "result JSON (stdout if omitted)");
  add_common_flags(rep, f);

  CLI11_PARSE(app, argc, argv);

  try {
    json cfg = build_config(f);
    std::string cfg_str = cfg.dump();

    if (enc->parsed()) {
      CloudHandle plain;
      plain.c = pcstab_cloud_load(f.input.c_str());
      if (!plain.c) return fail(PCSTAB_ERR_PARSE);
      CloudHandle cipher;
      StringHandle result;
      int rc = pcstab_encrypt(cfg_str.c_str(), plain.c, &cipher.c, &result.s);
      if (rc != PCSTAB_OK) return fail(rc);
      json res = json::parse(result.str());
      if (res.contains("warning"))
        std::cerr << "warning: " << res["warning"].get<std::string>() << "\n";
      if (pcstab_cloud_save_csv(cipher.c, f.output.c_str()) != PCSTAB_OK)
        return fail(PCSTAB_ERR_IO);
      if (!f.trace_file.empty())
        write_file(f.trace_file, res["trace"].dump(2) + "\n");
      return 0;
    }

    if (dec->parsed()) {
      CloudHandle cipher;
      if (!f.trace_file.empty()) {
        cfg["trace"] = json::parse(read_file(f.trace_file));
        cfg_str = cfg.dump();
      } else if (!f.input.empty()) {
        cipher.c = pcstab_cloud_load(f.input.c_str());
        if (!cipher.c) return fail(PCSTAB_ERR_PARSE);
      } else {
        std::cerr << "error: decrypt needs --input or --trace\n";
        return PCSTAB_ERR_USAGE;
      }
      CloudHandle recovered;
      StringHandle result;
      int rc = pcstab_decrypt(cfg_str.c_str(), cipher.c, &recovered.c,
                              &result.s);
      if (rc == PCSTAB_OK) {
        if (!f.output.empty())
          pcstab_cloud_save_csv(recovered.c, f.output.c_str());
        else
          std::cout << result.str() << "\n";
        return 0;
      }
      if (rc == PCSTAB_DIAGNOSIS) {
        std::string path = !f.diagnosis.empty()
                               ? f.diagnosis
                               : (!f.output.empty() ? f.output : "");
        if (!path.empty())
          write_file(path, result.str() + "\n");
        else
          std::cout << result.str() << "\n";
        std::cerr << "decryption failed; diagnosis emitted\n";
        return PCSTAB_DIAGNOSIS;
      }
      return fail(rc);
    }

    if (ana->parsed()) {
      CloudHandle cipher, plain;
      cipher.c = pcstab_cloud_load(f.input.c_str());
      if (!cipher.c) return fail(PCSTAB_ERR_PARSE);
      if (!f.plain_file.empty()) {
        plain.c = pcstab_cloud_load(f.plain_file.c_str());
        if (!plain.c) return fail(PCSTAB_ERR_PARSE);
      }
      StringHandle result;
      int rc = pcstab_analyze(cfg_str.c_str(), cipher.c, plain.c, &result.s);
      if (rc != PCSTAB_OK) return fail(rc);
      if (!f.output.empty())
        write_file(f.output, result.str() + "\n");
      else
        std::cout << result.str() << "\n";
      return 0;
    }

    if (ver->parsed()) {
      StringHandle result;
      int rc = pcstab_verify(cfg_str.c_str(), &result.s);
      if (rc != PCSTAB_OK && rc != PCSTAB_VIOLATION) return fail(rc);
      if (!f.output.empty())
        write_file(f.output, result.str() + "\n");
      else
        std::cout << result.str() << "\n";
      if (rc == PCSTAB_VIOLATION)
        std::cerr << "bound violation detected\n";
      return rc;
    }

    if (plot->parsed()) {
      std::string trace = read_file(f.trace_file);
      StringHandle result;
      int rc = pcstab_plotdata(trace.c_str(), &result.s);
      if (rc != PCSTAB_OK) return fail(rc);
      if (!f.output.empty())
        write_file(f.output, result.str() + "\n");
      else
        std::cout << result.str() << "\n";
      return 0;
    }

    if (rep->parsed()) {
      StringHandle result;
      int rc = pcstab_reproduce(example.c_str(), cfg_str.c_str(), &result.s);
      if (rc != PCSTAB_OK) return fail(rc);
      if (!f.output.empty())
        write_file(f.output, result.str() + "\n");
      else
        std::cout << result.str() << "\n";
      return 0;
    }
  } catch (const json::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return PCSTAB_ERR_PARSE;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return PCSTAB_ERR_USAGE;
  }
  return PCSTAB_ERR_USAGE;
}
