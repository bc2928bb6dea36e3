#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "cipher.hpp"
#include "stability.hpp"

namespace pcs {

using json = nlohmann::json;

inline constexpr const char* kConfigSchema = "pcstab-config-v1";
inline constexpr const char* kTraceSchema = "pcstab-trace-v1";
inline constexpr const char* kReportSchema = "pcstab-report-v1";

json cloud_to_json(const PointCloud& cloud);
PointCloud cloud_from_json(const json& j);

// Fills CipherParams and conventions from a config object; unknown keys are
// rejected so typos fail loudly.
CipherParams params_from_config(const json& config);

json trace_to_json(const EncryptTrace& trace, const CipherParams& params);

json outcome_to_json(const DecryptOutcome& outcome);

// command drivers; each returns the full JSON result document

// {"schema":..., "cipher": [...], "trace": {...}}
json run_encrypt(const json& config, const PointCloud& plain);

// `cipher` may be null when config["trace"] carries the ciphertext. The
// result holds "outcome"; "recovered" is present only for a unique solve.
json run_decrypt(const json& config, const PointCloud* cipher);

// Decryption driven purely by a recorded trace (plans, anchors and angles
// are taken from the trace, not regenerated from the key).
DecryptOutcome decrypt_from_trace(const json& trace);

json run_analyze(const json& config, const PointCloud& cipher,
                 const PointCloud* plain);

json run_verify(const json& config);

json run_plotdata(const json& trace);

json run_reproduce(const std::string& which, const json& config);

}  // namespace pcs
