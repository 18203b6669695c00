// Serialization: parameter JSON, run configs, CSV bodies and run metadata.
// Files are staged under temporary names and renamed together on success.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "turntable/ensemble.hpp"
#include "turntable/filippov.hpp"
#include "turntable/scan.hpp"
#include "turntable/singularity.hpp"
#include "turntable/tyre.hpp"

namespace turntable {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Round-trip safe decimal text (17 significant digits).
std::string format_double(double x);

Json params_to_json(const SystemParams& p);
/// Overlays the keys present in `j` onto `base`. Unknown keys, non-numeric
/// values and non-objects raise ConfigError.
SystemParams params_from_json(const Json& j, const SystemParams& base);

Json options_to_json(const IntegratorOptions& o);
IntegratorOptions options_from_json(const Json& j, const IntegratorOptions& base = {});

struct RunConfig {
  std::string command;
  SystemParams params;
  Json options = Json::object();
  std::string output;

  bool operator==(const RunConfig&) const = default;
};

Json run_config_to_json(const RunConfig& c);
RunConfig run_config_from_json(const Json& j);
/// Canonical text: sorted keys, no whitespace.
std::string canonical(const Json& j);
/// FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const RunConfig& c);

Json read_json_file(const std::filesystem::path& path);

// CSV bodies. Header row first, LF line endings.
std::string trajectory_csv(const Trajectory& traj, const SystemParams& p);
std::string scan_mask_csv(const ScanResult& res, ScanMask mask);
std::string ensemble_summary_csv(const std::vector<EnsembleOutcome>& outcomes);
struct TyreCurvePoint {
  double phi = 0.0;
  TyreOutput out;
};
std::string tyre_curve_csv(const std::vector<TyreCurvePoint>& pts);

Json event_to_json(const Event& e);
Json design_to_json(const DesignResult& d);
Json report_to_json(const SingularityReport& r);

/// Stages files next to their destination and renames them all on commit.
/// Staged files are removed if the object dies uncommitted.
class OutputSet {
 public:
  OutputSet() = default;
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet();

  void add(const std::filesystem::path& path, const std::string& content);
  void commit();
  [[nodiscard]] std::vector<std::filesystem::path> paths() const;

 private:
  struct Entry {
    std::filesystem::path final_path;
    std::filesystem::path temp_path;
  };
  std::vector<Entry> entries_;
  bool committed_ = false;
};

}  // namespace turntable
