#include "turntable/io.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace turntable {

namespace {

struct ParamField {
  const char* key;
  double SystemParams::*member;
};

constexpr ParamField kParamFields[] = {
    {"d", &SystemParams::d},           {"m", &SystemParams::m},   {"beta", &SystemParams::beta},
    {"c1", &SystemParams::c1},         {"c2", &SystemParams::c2}, {"k2", &SystemParams::k2},
    {"r0", &SystemParams::r0},         {"omega0", &SystemParams::omega0},
    {"mu", &SystemParams::mu},         {"gamma", &SystemParams::gamma},
    {"kappa", &SystemParams::kappa},
};

std::string num_or_empty(double x) { return std::isfinite(x) ? format_double(x) : std::string(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

Json params_to_json(const SystemParams& p) {
  Json j = Json::object();
  for (const auto& f : kParamFields) j[f.key] = p.*(f.member);
  return j;
}

SystemParams params_from_json(const Json& j, const SystemParams& base) {
  if (!j.is_object()) throw ConfigError("params: expected a JSON object");
  SystemParams p = base;
  for (const auto& [key, value] : j.items()) {
    const ParamField* field = nullptr;
    for (const auto& f : kParamFields)
      if (key == f.key) field = &f;
    if (!field) throw ConfigError(fmt::format("params: unknown key '{}'", key));
    if (!value.is_number()) throw ConfigError(fmt::format("params: key '{}' must be a number", key));
    p.*(field->member) = value.get<double>();
  }
  return p;
}

Json options_to_json(const IntegratorOptions& o) {
  Json j = {{"t_max", o.t_max},
            {"rtol", o.rtol},
            {"atol", o.atol},
            {"max_step", o.max_step},
            {"initial_step", o.initial_step},
            {"tol_event", o.tol_event},
            {"tol_lambda", o.tol_lambda},
            {"tol_sing", o.tol_sing},
            {"tol_full_stick", o.tol_full_stick},
            {"blowup_bound", o.blowup_bound},
            {"max_events", o.max_events},
            {"allow_escaping_stick", o.allow_escaping_stick}};
  if (o.return_center) {
    j["return_center"] = {o.return_center->r, o.return_center->v, o.return_center->omega};
    j["return_radius"] = o.return_radius;
    j["arm_radius"] = o.arm_radius;
  }
  return j;
}

IntegratorOptions options_from_json(const Json& j, const IntegratorOptions& base) {
  if (!j.is_object()) throw ConfigError("options: expected a JSON object");
  IntegratorOptions o = base;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "t_max") o.t_max = v.get<double>();
      else if (key == "rtol") o.rtol = v.get<double>();
      else if (key == "atol") o.atol = v.get<double>();
      else if (key == "max_step") o.max_step = v.get<double>();
      else if (key == "initial_step") o.initial_step = v.get<double>();
      else if (key == "tol_event") o.tol_event = v.get<double>();
      else if (key == "tol_lambda") o.tol_lambda = v.get<double>();
      else if (key == "tol_sing") o.tol_sing = v.get<double>();
      else if (key == "tol_full_stick") o.tol_full_stick = v.get<double>();
      else if (key == "blowup_bound") o.blowup_bound = v.get<double>();
      else if (key == "max_events") o.max_events = v.get<std::size_t>();
      else if (key == "allow_escaping_stick") o.allow_escaping_stick = v.get<bool>();
      else if (key == "return_center") o.return_center = State{v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()};
      else if (key == "return_radius") o.return_radius = v.get<double>();
      else if (key == "arm_radius") o.arm_radius = v.get<double>();
      else throw ConfigError(fmt::format("options: unknown key '{}'", key));
    }
  } catch (const Json::exception& e) {
    throw ConfigError(fmt::format("options: {}", e.what()));
  }
  return o;
}

Json run_config_to_json(const RunConfig& c) {
  return {{"command", c.command}, {"params", params_to_json(c.params)}, {"options", c.options}, {"output", c.output}};
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("run config: expected a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") c.command = v.get<std::string>();
      else if (key == "params") c.params = params_from_json(v, SystemParams{});
      else if (key == "options") c.options = v;
      else if (key == "output") c.output = v.get<std::string>();
      else throw ConfigError(fmt::format("run config: unknown key '{}'", key));
    }
  } catch (const Json::exception& e) {
    throw ConfigError(fmt::format("run config: {}", e.what()));
  }
  return c;
}

std::string canonical(const Json& j) { return j.dump(); }

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical(run_config_to_json(c))) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(fmt::format("malformed JSON in '{}': {}", path.string(), e.what()));
  }
}

std::string trajectory_csv(const Trajectory& traj, const SystemParams& p) {
  std::string out = "t,r,v,omega,h,g,mode,lambda\n";
  for (const auto& seg : traj.segments) {
    const char* mode = to_string(seg.mode.tag);
    for (const auto& s : seg.samples) {
      out += fmt::format("{},{},{},{},{},{},{},{}\n", format_double(s.t), format_double(s.state.r),
                         format_double(s.state.v), format_double(s.state.omega), format_double(eval_h(s.state, p)),
                         format_double(eval_g(s.state, p)), mode,
                         seg.mode.tag == ContactTag::Stick ? num_or_empty(s.lambda) : std::string());
    }
  }
  out += "# events: tag,time,r,v,omega,region,exit_side,detail\n";
  for (const auto& e : traj.events()) {
    out += fmt::format("# {},{},{},{},{},{},{},{}\n", to_string(e.tag), format_double(e.time), format_double(e.state.r),
                       format_double(e.state.v), format_double(e.state.omega), to_string(e.region), e.exit_side,
                       csv_field(e.detail));
  }
  return out;
}

std::string scan_mask_csv(const ScanResult& res, ScanMask mask) {
  std::string out = "r_star,omega_star,value,valid\n";
  for (const auto& c : res.cells) {
    out += fmt::format("{},{},{},{}\n", format_double(c.r_star), format_double(c.omega_star),
                       c.valid && c.mask(mask) ? 1 : 0, c.valid ? 1 : 0);
  }
  return out;
}

std::string ensemble_summary_csv(const std::vector<EnsembleOutcome>& outcomes) {
  std::string out = "member_id,returned,return_time,n_crossings,n_stick_segments,singularity_return,final_event\n";
  for (const auto& o : outcomes) {
    const std::string final_event =
        o.error.empty() ? to_string(o.trajectory.last_event().tag) : "error: " + o.error;
    out += fmt::format("{},{},{},{},{},{},{}\n", o.member_id, o.returned ? 1 : 0,
                       o.return_time ? format_double(*o.return_time) : std::string(), o.n_crossings,
                       o.n_stick_segments, o.singularity_return ? 1 : 0, csv_field(final_event));
  }
  return out;
}

std::string tyre_curve_csv(const std::vector<TyreCurvePoint>& pts) {
  std::string out = "phi,F,M,regime\n";
  for (const auto& pt : pts)
    out += fmt::format("{},{},{},{}\n", format_double(pt.phi), format_double(pt.out.force),
                       format_double(pt.out.moment), to_string(pt.out.regime));
  return out;
}

Json event_to_json(const Event& e) {
  return {{"tag", to_string(e.tag)},
          {"time", e.time},
          {"state", {e.state.r, e.state.v, e.state.omega}},
          {"region", to_string(e.region)},
          {"exit_side", e.exit_side},
          {"detail", e.detail}};
}

Json design_to_json(const DesignResult& d) {
  return {{"r_star", d.x_star.r},
          {"v_star", d.v_star},
          {"omega_star", d.x_star.omega},
          {"kappa", d.kappa},
          {"k2", d.k2},
          {"residuals", {{"h", d.residuals[0]}, {"lie_plus", d.residuals[1]}, {"lie_minus", d.residuals[2]}}},
          {"params", params_to_json(d.params)}};
}

Json report_to_json(const SingularityReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); };
  return {{"x_star", {r.x_star.r, r.x_star.v, r.x_star.omega}},
          {"kpp", r.k.kpp},
          {"kpm", r.k.kpm},
          {"kmp", r.k.kmp},
          {"kmm", r.k.kmm},
          {"j1", num(r.j1)},
          {"j2", num(r.j2)},
          {"eig1", num(r.eig1)},
          {"eig2", num(r.eig2)},
          {"evec1", {num(r.evec1[0]), num(r.evec1[1])}},
          {"evec2", {num(r.evec2[0]), num(r.evec2[1])}},
          {"case", to_string(r.case_tag)}};
}

OutputSet::~OutputSet() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& e : entries_) std::filesystem::remove(e.temp_path, ec);
}

void OutputSet::add(const std::filesystem::path& path, const std::string& content) {
  if (committed_) throw std::logic_error("OutputSet: already committed");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path temp = path;
  temp += ".partial";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    out << content;
    if (!out.flush()) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
  }
  entries_.push_back({path, temp});
}

void OutputSet::commit() {
  for (const auto& e : entries_) std::filesystem::rename(e.temp_path, e.final_path);
  committed_ = true;
}

std::vector<std::filesystem::path> OutputSet::paths() const {
  std::vector<std::filesystem::path> out;
  for (const auto& e : entries_) out.push_back(e.final_path);
  return out;
}

}  // namespace turntable
