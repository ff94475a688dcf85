// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/config.hpp"

#include <cstdlib>
#include <utility>

#include <nlohmann/json.hpp>

#include "coporeg/errors.hpp"
#include "coporeg/problem_io.hpp"

namespace coporeg {

namespace {

using nlohmann::json;

std::pair<const char*, double Tolerances::*> kTolFields[] = {
    {"tol_feas", &Tolerances::feas},     {"tol_support", &Tolerances::support},
    {"tol_rank", &Tolerances::rank},     {"tol_cop", &Tolerances::cop},
    {"tol_strict", &Tolerances::strict}, {"tol_lp", &Tolerances::lp},
    {"tol_mult", &Tolerances::mult},     {"tol_neg", &Tolerances::neg},
    {"tol_zero", &Tolerances::zero},     {"tol_cert", &Tolerances::cert},
    {"tol_band", &Tolerances::band},
};

template <class T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ParseError("config field \"" + key + "\" has the wrong type");
  }
}

}  // namespace

void RunConfig::validate() const {
  for (const auto& [name, field] : kTolFields) {
    if (!(tol.*field > 0.0)) throw InputError(std::string(name) + " must be positive");
  }
  if (!(h > 0.0 && h <= 0.25)) throw InputError("h must lie in (0, 1/4]");
  if (!(R > 0.0)) throw InputError("R must be positive");
  if (cap < 0) throw InputError("cap must be nonnegative (0 selects 2n + 2)");
  if (samples < 0) throw InputError("samples must be nonnegative");
  if (p_max < 2) throw InputError("p_max must be at least 2");
}

SipOptions RunConfig::sip_options() const {
  SipOptions o;
  o.tol = tol;
  o.h = h;
  o.R = R;
  o.p_max = p_max;
  return o;
}

RegOptions RunConfig::reg_options() const { return RegOptions{sip_options(), cap}; }

void merge_config_json(RunConfig& cfg, std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    bool done = false;
    for (const auto& [name, field] : kTolFields) {
      if (key == name) {
        cfg.tol.*field = get_as<double>(v, key);
        done = true;
      }
    }
    if (done) continue;
    if (key == "h") cfg.h = get_as<double>(v, key);
    else if (key == "R") cfg.R = get_as<double>(v, key);
    else if (key == "cap") cfg.cap = get_as<int>(v, key);
    else if (key == "p_max") cfg.p_max = get_as<int>(v, key);
    else if (key == "seed") cfg.seed = get_as<std::uint64_t>(v, key);
    else if (key == "samples") cfg.samples = get_as<int>(v, key);
    else if (key == "out") cfg.out = get_as<std::string>(v, key);
    else if (key == "report") cfg.report = get_as<std::string>(v, key);
    else if (key == "verbosity") cfg.verbosity = get_as<int>(v, key);
    else throw ParseError("unknown config field \"" + key + "\"");
  }
}

RunConfig config_from_environment() {
  RunConfig cfg;
  if (const char* path = std::getenv("COPOREG_CONFIG"); path && *path) {
    merge_config_json(cfg, read_file(path));
  }
  return cfg;
}

std::string tolerances_json(const Tolerances& tol) {
  json j = json::object();
  for (const auto& [name, field] : kTolFields) j[name] = tol.*field;
  return j.dump();
}

}  // namespace coporeg
