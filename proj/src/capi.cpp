#include "pcstab.h"

#include <cstring>
#include <new>
#include <string>

#include "cloud_io.hpp"
#include "driver.hpp"

using pcs::json;

struct pcstab_cloud {
  pcs::PointCloud cloud;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_result(char** result_json, const json& j) {
  if (result_json) *result_json = dup_string(j.dump(2));
}

json parse_config(const char* config_json) {
  if (config_json == nullptr || *config_json == '\0') return json::object();
  return json::parse(config_json);
}

// Maps exceptions from the body onto status codes.
template <typename Fn>
int guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const json::parse_error& e) {
    g_last_error = e.what();
    return PCSTAB_ERR_PARSE;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return PCSTAB_ERR_USAGE;
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return PCSTAB_ERR_USAGE;
  } catch (const std::runtime_error& e) {
    g_last_error = e.what();
    return PCSTAB_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PCSTAB_ERR_USAGE;
  }
}

}  // namespace

extern "C" {

const char* pcstab_last_error(void) { return g_last_error.c_str(); }

void pcstab_string_free(char* s) { delete[] s; }

pcstab_cloud* pcstab_cloud_create(const double* coords, size_t n, int dim) {
  pcstab_cloud* out = nullptr;
  guarded([&] {
    if (coords == nullptr || n == 0 || (dim != 2 && dim != 3))
      throw std::invalid_argument("pcstab_cloud_create: bad arguments");
    auto* c = new pcstab_cloud;
    c->cloud.dim = dim;
    for (size_t j = 0; j < n; ++j) {
      pcs::Point p;
      p.dim = dim;
      for (int i = 0; i < dim; ++i) p.v[i] = coords[j * dim + i];
      c->cloud.pts.push_back(p);
    }
    out = c;
    return PCSTAB_OK;
  });
  return out;
}

pcstab_cloud* pcstab_cloud_load(const char* path) {
  pcstab_cloud* out = nullptr;
  guarded([&] {
    if (path == nullptr) throw std::invalid_argument("null path");
    auto* c = new pcstab_cloud;
    c->cloud = pcs::load_cloud(path);
    out = c;
    return PCSTAB_OK;
  });
  return out;
}

int pcstab_cloud_save_csv(const pcstab_cloud* cloud, const char* path) {
  return guarded([&] {
    if (cloud == nullptr || path == nullptr)
      throw std::invalid_argument("null argument");
    pcs::save_csv(cloud->cloud, path);
    return PCSTAB_OK;
  });
}

size_t pcstab_cloud_size(const pcstab_cloud* cloud) {
  return cloud ? cloud->cloud.size() : 0;
}

int pcstab_cloud_dim(const pcstab_cloud* cloud) {
  return cloud ? cloud->cloud.dim : 0;
}

int pcstab_cloud_get(const pcstab_cloud* cloud, size_t index, double* out) {
  return guarded([&] {
    if (cloud == nullptr || out == nullptr || index >= cloud->cloud.size())
      throw std::invalid_argument("pcstab_cloud_get: bad arguments");
    const pcs::Point& p = cloud->cloud.pts[index];
    for (int i = 0; i < p.dim; ++i) out[i] = p.v[i];
    return PCSTAB_OK;
  });
}

void pcstab_cloud_free(pcstab_cloud* cloud) { delete cloud; }

int pcstab_encrypt(const char* config_json, const pcstab_cloud* plain,
                   pcstab_cloud** cipher_out, char** result_json) {
  return guarded([&] {
    if (plain == nullptr) throw std::invalid_argument("null plaintext cloud");
    json cfg = parse_config(config_json);
    json res = pcs::run_encrypt(cfg, plain->cloud);
    if (cipher_out) {
      auto* c = new pcstab_cloud;
      c->cloud = pcs::cloud_from_json(res.at("cipher"));
      *cipher_out = c;
    }
    set_result(result_json, res);
    return PCSTAB_OK;
  });
}

int pcstab_decrypt(const char* config_json, const pcstab_cloud* cipher,
                   pcstab_cloud** recovered_out, char** result_json) {
  return guarded([&] {
    json cfg = parse_config(config_json);
    json res = pcs::run_decrypt(cfg, cipher ? &cipher->cloud : nullptr);
    set_result(result_json, res);
    if (!res.at("ok").get<bool>()) return static_cast<int>(PCSTAB_DIAGNOSIS);
    if (recovered_out) {
      auto* c = new pcstab_cloud;
      c->cloud = pcs::cloud_from_json(res.at("outcome").at("recovered"));
      *recovered_out = c;
    }
    return static_cast<int>(PCSTAB_OK);
  });
}

int pcstab_analyze(const char* config_json, const pcstab_cloud* cipher,
                   const pcstab_cloud* plain, char** result_json) {
  return guarded([&] {
    if (cipher == nullptr) throw std::invalid_argument("null ciphertext cloud");
    json cfg = parse_config(config_json);
    json res = pcs::run_analyze(cfg, cipher->cloud,
                                plain ? &plain->cloud : nullptr);
    set_result(result_json, res);
    return PCSTAB_OK;
  });
}

int pcstab_verify(const char* config_json, char** result_json) {
  return guarded([&] {
    json cfg = parse_config(config_json);
    json res = pcs::run_verify(cfg);
    set_result(result_json, res);
    return res.at("violation").get<bool>() ? static_cast<int>(PCSTAB_VIOLATION)
                                           : static_cast<int>(PCSTAB_OK);
  });
}

int pcstab_plotdata(const char* trace_json, char** result_json) {
  return guarded([&] {
    if (trace_json == nullptr) throw std::invalid_argument("null trace");
    json trace = json::parse(trace_json);
    json res = pcs::run_plotdata(trace);
    set_result(result_json, res);
    return PCSTAB_OK;
  });
}

int pcstab_reproduce(const char* which, const char* config_json,
                     char** result_json) {
  return guarded([&] {
    if (which == nullptr) throw std::invalid_argument("null example name");
    json cfg = parse_config(config_json);
    json res = pcs::run_reproduce(which, cfg);
    set_result(result_json, res);
    return PCSTAB_OK;
  });
}

}  // extern "C"
