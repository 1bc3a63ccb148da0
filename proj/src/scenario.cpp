#include "dkg/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dkg/types.hpp"

namespace dkg {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ValidationError(path + ": " + why);
}

void expect_keys(const json& j, const std::string& path,
                 const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) fail(path + "." + item.key(), "unknown key");
}

double get_num(const json& j, const std::string& path, const std::string& key,
               double fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required) fail(path + "." + key, "missing");
    return fallback;
  }
  const json& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::string get_str(const json& j, const std::string& path,
                    const std::string& key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) fail(path + "." + key, "expected a string");
  return j.at(key).get<std::string>();
}

std::vector<double> get_num_list(const json& j, const std::string& path,
                                 const std::string& key,
                                 std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array()) fail(path + "." + key, "expected an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) fail(path + "." + key, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

DataSpec parse_data_spec(const json& j, const std::string& path) {
  expect_keys(j, path,
              {"kind", "scale", "amplitude", "mod_k", "band_max_mode", "decay",
               "real_symmetric"});
  DataSpec spec;
  std::string kind = get_str(j, path, "kind", "");
  if (kind == "zero") {
    spec.gen.kind = GeneratorSpec::Kind::zero;
  } else if (kind == "poisson") {
    spec.gen.kind = GeneratorSpec::Kind::poisson;
  } else if (kind == "gaussian") {
    spec.gen.kind = GeneratorSpec::Kind::gaussian;
  } else if (kind == "sech") {
    spec.gen.kind = GeneratorSpec::Kind::sech;
  } else if (kind == "random") {
    spec.source = DataSpec::Source::random;
  } else {
    fail(path + ".kind",
         "expected one of zero, poisson, gaussian, sech, random");
  }
  if (spec.source == DataSpec::Source::generator) {
    spec.gen.scale = get_num(j, path, "scale", spec.gen.scale);
    spec.gen.amplitude = get_num(j, path, "amplitude", spec.gen.amplitude);
    double mk = get_num(j, path, "mod_k", 0.0);
    if (mk != std::floor(mk)) fail(path + ".mod_k", "expected an integer");
    spec.gen.mod_k = static_cast<int>(mk);
    if (spec.gen.kind != GeneratorSpec::Kind::zero && !(spec.gen.scale > 0.0))
      fail(path + ".scale", "must be positive");
  } else {
    double bm = get_num(j, path, "band_max_mode", 0.0, true);
    if (bm != std::floor(bm) || bm < 1.0)
      fail(path + ".band_max_mode", "expected a positive integer");
    spec.band_max_mode = static_cast<int>(bm);
    spec.decay = get_num(j, path, "decay", spec.decay);
    if (!(spec.decay >= 0.0)) fail(path + ".decay", "must be nonnegative");
    if (j.contains("real_symmetric")) {
      if (!j.at("real_symmetric").is_boolean())
        fail(path + ".real_symmetric", "expected a boolean");
      spec.real_symmetric = j.at("real_symmetric").get<bool>();
    }
  }
  return spec;
}

double spec_strip_radius(const DataSpec& spec) {
  if (spec.source == DataSpec::Source::random)
    return std::numeric_limits<double>::infinity();
  return strip_radius(spec.gen);
}

void validate(const Scenario& s) {
  if (!(s.half_length_over_pi > 0.0))
    fail("grid.half_length_over_pi", "must be positive");
  if (s.modes < 16 || s.modes % 2 != 0)
    fail("grid.modes", "must be an even integer of at least 16");
  if (!(s.masses.dirac >= 0.0)) fail("masses.dirac", "must be nonnegative");
  if (!(s.sigma0 > 0.0)) fail("sigma0", "must be positive");
  if (!(s.horizon > 0.0)) fail("horizon", "must be positive");
  if (!(s.dt > 0.0) || s.dt > s.horizon)
    fail("dt", "must be positive and at most the horizon");
  if (s.probe_interval < 0.0) fail("probe_interval", "must be nonnegative");

  const struct {
    const char* name;
    const DataSpec* spec;
  } slots[4] = {{"data.psi_p", &s.psi_p},
                {"data.psi_m", &s.psi_m},
                {"data.phi0", &s.phi0},
                {"data.phi1", &s.phi1}};
  for (const auto& slot : slots) {
    double r = spec_strip_radius(*slot.spec);
    if (s.sigma0 >= r) {
      std::ostringstream os;
      os << "sigma0 = " << s.sigma0
         << " reaches the profile's strip radius " << r
         << "; weighted data norms would diverge";
      fail(slot.name, os.str());
    }
  }

  if (s.has_constants) {
    if (!(s.consts.c0 > 0.0)) fail("constants.c0", "must be positive");
    if (!(s.consts.C > 0.0)) fail("constants.C", "must be positive");
  }
  for (double t : s.t_list)
    if (!(t > 0.0)) fail("radius.t_list", "entries must be positive");
  for (double sg : s.checks.sigmas)
    if (sg < 0.0) fail("checks.sigmas", "entries must be nonnegative");
  for (double h : s.checks.horizons)
    if (!(h > 0.0)) fail("checks.horizons", "entries must be positive");
  if (s.checks.random_draws < 0) fail("checks.random_draws", "must be nonnegative");
  if (s.certify.probes < 1) fail("certify.probes", "must be at least 1");
  if (s.certify.explicit_inputs &&
      (!(s.certify.m0 >= 0.0) || !(s.certify.n0 >= 0.0)))
    fail("certify.m0", "explicit inputs must be nonnegative");
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario: not valid JSON: ") + e.what());
  }
  expect_keys(j, "scenario",
              {"schema_version", "name", "grid", "masses", "sigma0", "horizon",
               "dt", "probe_interval", "seed", "data", "constants", "radius",
               "checks", "certify"});

  std::string schema = get_str(j, "scenario", "schema_version", kScenarioSchema);
  if (schema != kScenarioSchema)
    fail("schema_version", "unsupported (expected " +
                               std::string(kScenarioSchema) + ")");

  Scenario s;
  s.name = get_str(j, "scenario", "name", s.name);

  if (!j.contains("grid")) fail("grid", "missing");
  const json& jg = j.at("grid");
  expect_keys(jg, "grid", {"half_length_over_pi", "modes"});
  s.half_length_over_pi =
      get_num(jg, "grid", "half_length_over_pi", s.half_length_over_pi);
  double n = get_num(jg, "grid", "modes", s.modes);
  if (n != std::floor(n)) fail("grid.modes", "expected an integer");
  s.modes = static_cast<int>(n);

  if (j.contains("masses")) {
    const json& jm = j.at("masses");
    expect_keys(jm, "masses", {"dirac", "kg"});
    s.masses.dirac = get_num(jm, "masses", "dirac", s.masses.dirac);
    std::string kg = get_str(jm, "masses", "kg", "one");
    if (kg == "one")
      s.masses.kg = Masses::Kg::one;
    else if (kg == "zero")
      s.masses.kg = Masses::Kg::zero;
    else
      fail("masses.kg", "expected \"one\" or \"zero\"");
  }

  s.sigma0 = get_num(j, "scenario", "sigma0", s.sigma0);
  s.horizon = get_num(j, "scenario", "horizon", s.horizon);
  s.dt = get_num(j, "scenario", "dt", s.dt);
  s.probe_interval = get_num(j, "scenario", "probe_interval", s.probe_interval);
  double seed = get_num(j, "scenario", "seed", 0.0);
  if (seed != std::floor(seed) || seed < 0.0)
    fail("seed", "expected a nonnegative integer");
  s.seed = static_cast<std::uint64_t>(seed);

  if (!j.contains("data")) fail("data", "missing");
  const json& jd = j.at("data");
  expect_keys(jd, "data", {"psi_p", "psi_m", "phi0", "phi1"});
  auto slot = [&](const char* key, DataSpec& out) {
    if (!jd.contains(key)) fail(std::string("data.") + key, "missing");
    out = parse_data_spec(jd.at(key), std::string("data.") + key);
  };
  slot("psi_p", s.psi_p);
  slot("psi_m", s.psi_m);
  slot("phi0", s.phi0);
  slot("phi1", s.phi1);

  if (j.contains("constants")) {
    const json& jc = j.at("constants");
    expect_keys(jc, "constants", {"c0", "C", "c2"});
    s.has_constants = true;
    s.consts.c0 = get_num(jc, "constants", "c0", 0.0, true);
    s.consts.C = get_num(jc, "constants", "C", 0.0, true);
    s.consts.c2 = get_num(jc, "constants", "c2", 1.0 / std::sqrt(s.consts.c0));
  }

  if (j.contains("radius")) {
    const json& jr = j.at("radius");
    expect_keys(jr, "radius", {"t_list"});
    s.t_list = get_num_list(jr, "radius", "t_list", {});
  }

  if (j.contains("checks")) {
    const json& jc = j.at("checks");
    expect_keys(jc, "checks",
                {"sigmas", "horizons", "random_draws", "pass_constant"});
    s.checks.sigmas = get_num_list(jc, "checks", "sigmas", s.checks.sigmas);
    s.checks.horizons =
        get_num_list(jc, "checks", "horizons", s.checks.horizons);
    double d = get_num(jc, "checks", "random_draws", s.checks.random_draws);
    if (d != std::floor(d)) fail("checks.random_draws", "expected an integer");
    s.checks.random_draws = static_cast<int>(d);
    s.checks.pass_constant =
        get_num(jc, "checks", "pass_constant", s.checks.pass_constant);
  }

  if (j.contains("certify")) {
    const json& jc = j.at("certify");
    expect_keys(jc, "certify",
                {"m0", "n0", "verify", "probes", "sigma_override"});
    if (jc.contains("m0") || jc.contains("n0")) {
      if (!jc.contains("m0") || !jc.contains("n0"))
        fail("certify", "explicit inputs need both m0 and n0");
      s.certify.explicit_inputs = true;
      s.certify.m0 = get_num(jc, "certify", "m0", 0.0, true);
      s.certify.n0 = get_num(jc, "certify", "n0", 0.0, true);
    }
    if (jc.contains("verify")) {
      if (!jc.at("verify").is_boolean())
        fail("certify.verify", "expected a boolean");
      s.certify.verify = jc.at("verify").get<bool>();
    }
    double p = get_num(jc, "certify", "probes", s.certify.probes);
    if (p != std::floor(p)) fail("certify.probes", "expected an integer");
    s.certify.probes = static_cast<int>(p);
    s.certify.sigma_override =
        get_num(jc, "certify", "sigma_override", s.certify.sigma_override);
  }

  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

double scenario_half_length(const Scenario& s) {
  return s.half_length_over_pi * M_PI;
}

GridPtr scenario_grid(const Scenario& s) {
  return make_grid(scenario_half_length(s), s.modes);
}

CauchyData scenario_data(const Scenario& s, const GridPtr& grid) {
  auto realize = [&](const DataSpec& spec, std::uint64_t slot) {
    if (spec.source == DataSpec::Source::generator)
      return generate(grid, spec.gen);
    return random_band_limited(grid, s.seed + 0x9e3779b97f4a7c15ull * slot,
                               spec.band_max_mode, spec.decay,
                               spec.real_symmetric);
  };
  CauchyData data;
  data.psi_p = realize(s.psi_p, 1);
  data.psi_m = realize(s.psi_m, 2);
  data.phi0 = realize(s.phi0, 3);
  data.phi1 = realize(s.phi1, 4);
  return data;
}

}  // namespace dkg
