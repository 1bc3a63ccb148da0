#include "dkg/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dkg/types.hpp"

namespace dkg {
namespace {

using nlohmann::json;

void append_row(std::string& out, const std::vector<double>& vals) {
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) out += ',';
    out += format_double(vals[i]);
  }
  out += '\n';
}

json ratio_json(const RatioReport& r) {
  return json{{"check", r.check},     {"sample", r.sample},
              {"lhs", r.lhs},         {"rhs", r.rhs},
              {"ratio", r.ratio},     {"horizon", r.horizon},
              {"sigma", r.sigma},     {"pass", r.pass},
              {"vacuous", r.vacuous}};
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << body;
  if (!out) throw ValidationError("write failed: " + path);
}

std::string ledger_csv(const NormLedger& ledger) {
  std::string out = "# schema=dkg.ledger.v1 sigma=" + format_double(ledger.sigma) +
                    " massless=" + (ledger.massless ? std::string("1") : std::string("0")) + "\n";
  out +=
      "t,charge,m_sigma,m_sigma_minus,m_sigma_plus,m_prime,n_sigma,phi_l2,"
      "n_prime,sigma_hat,sigma_hat_residual\n";
  for (const LedgerRow& r : ledger.rows)
    append_row(out, {r.t, r.charge, r.m_sigma, r.m_sigma_minus, r.m_sigma_plus,
                     r.m_prime, r.n_sigma, r.phi_l2, r.n_prime, r.sigma_hat,
                     r.sigma_hat_residual});
  return out;
}

std::string radius_curve_csv(const std::vector<RadiusPoint>& points) {
  std::string out = "# schema=dkg.radius_curve.v1\n";
  out += "T,sigma_cert,sigma_measured,certificate_valid,pass\n";
  for (const RadiusPoint& p : points) {
    out += format_double(p.T);
    out += ',';
    out += format_double(p.sigma_cert);
    out += ',';
    out += format_double(p.sigma_measured);
    out += ',';
    out += p.certificate_valid ? '1' : '0';
    out += ',';
    out += p.pass ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string ratio_reports_csv(const std::vector<RatioReport>& reports) {
  std::string out = "# schema=dkg.checks.v1\n";
  out += "check,sample,sigma,horizon,lhs,rhs,ratio,pass,vacuous\n";
  for (const RatioReport& r : reports) {
    out += r.check;
    out += ',';
    out += r.sample;
    out += ',';
    out += format_double(r.sigma);
    out += ',';
    out += format_double(r.horizon);
    out += ',';
    out += format_double(r.lhs);
    out += ',';
    out += format_double(r.rhs);
    out += ',';
    out += format_double(r.ratio);
    out += ',';
    out += r.pass ? '1' : '0';
    out += ',';
    out += r.vacuous ? '1' : '0';
    out += '\n';
  }
  return out;
}

nlohmann::json constants_json(const CalibratedConstants& consts) {
  return json{{"schema_version", "dkg.constants.v1"},
              {"c0", consts.c0},
              {"C", consts.C},
              {"c2", consts.c2}};
}

CalibratedConstants constants_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("constants: not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("c0") || !j.contains("C"))
    throw ValidationError("constants: need numeric fields c0 and C");
  CalibratedConstants k;
  if (!j.at("c0").is_number() || !j.at("C").is_number())
    throw ValidationError("constants: need numeric fields c0 and C");
  k.c0 = j.at("c0").get<double>();
  k.C = j.at("C").get<double>();
  if (!(k.c0 > 0.0) || !(k.C > 0.0))
    throw ValidationError("constants: c0 and C must be positive");
  k.c2 = j.contains("c2") && j.at("c2").is_number() ? j.at("c2").get<double>()
                                                    : 1.0 / std::sqrt(k.c0);
  return k;
}

nlohmann::json calibration_json(const CalibrationReport& report) {
  return json{{"schema_version", "dkg.calibration.v1"},
              {"constants", constants_json(report.consts)},
              {"ratio_mass", report.ratio_mass},
              {"ratio_product", report.ratio_product},
              {"ratio_null", report.ratio_null},
              {"c0_candidate", report.c0_candidate},
              {"halvings", report.halvings},
              {"sigma", report.sigma},
              {"dirac_mass", report.dirac_mass},
              {"samples", report.sample_labels}};
}

nlohmann::json picard_json(const PicardDiagnostics& diag) {
  return json{{"schema_version", "dkg.picard.v1"},
              {"delta", diag.delta},
              {"sigma", diag.sigma},
              {"a0", diag.a0},
              {"b0", diag.b0},
              {"size_a", diag.A},
              {"size_b", diag.B},
              {"diff_a", diag.dA},
              {"diff_b", diag.dB},
              {"ratios", diag.ratios},
              {"residual", diag.residual},
              {"converged", diag.converged},
              {"iterations", diag.iterations}};
}

nlohmann::json ratio_report_json(const RatioReport& report) {
  json j = ratio_json(report);
  j["schema_version"] = "dkg.ratio.v1";
  return j;
}

nlohmann::json symbol_report_json(const SymbolBoundReport& report) {
  return json{{"schema_version", "dkg.symbol.v1"},
              {"worst_margin", report.worst_margin},
              {"worst_xi", report.worst_xi},
              {"worst_sigma", report.worst_sigma},
              {"worst_eps", report.worst_eps},
              {"points", report.points},
              {"pass", report.pass}};
}

nlohmann::json charge_derivative_json(const ChargeDerivativeReport& report) {
  return json{{"schema_version", "dkg.charge_derivative.v1"},
              {"sigma", report.sigma},
              {"eps", report.eps},
              {"t_center", report.t_center},
              {"dt", report.dt},
              {"fd", report.fd},
              {"rhs", report.rhs},
              {"residual_rel", report.residual_rel}};
}

nlohmann::json almost_conservation_json(const AlmostConservationReport& report) {
  return json{{"schema_version", "dkg.window.v1"},
              {"sigma", report.sigma},
              {"delta", report.delta},
              {"dt", report.dt},
              {"massless", report.massless},
              {"m0", report.m0},
              {"n0", report.n0},
              {"sup_m", report.sup_m},
              {"sup_n", report.sup_n},
              {"inc_eps_minus", report.inc_eps_minus},
              {"inc_eps_plus", report.inc_eps_plus},
              {"mest", ratio_json(report.mest)},
              {"nest", ratio_json(report.nest)},
              {"ib1_plus", ratio_json(report.ib1_plus)},
              {"ib1_minus", ratio_json(report.ib1_minus)},
              {"ib2_plus", ratio_json(report.ib2_plus)},
              {"ib2_minus", ratio_json(report.ib2_minus)}};
}

nlohmann::json certificate_json(const Certificate& cert) {
  json j{{"schema_version", "dkg.certificate.v1"},
         {"sigma0", cert.in.sigma0},
         {"m0", cert.in.m0},
         {"n0", cert.in.n0},
         {"T", cert.in.T},
         {"dirac_mass", cert.in.masses.dirac},
         {"kg", cert.in.masses.kg == Masses::Kg::one ? "one" : "zero"},
         {"constants", constants_json(cert.in.consts)},
         {"c2", cert.c2},
         {"A", cert.A},
         {"delta", cert.delta},
         {"n", cert.n},
         {"sigma_cert", cert.sigma_cert},
         {"c_asym", cert.c_asym},
         {"tlarge_ok", cert.tlarge_ok},
         {"a_condition_ok", cert.a_condition_ok},
         {"clamped_to_sigma0", cert.clamped_to_sigma0},
         {"valid", cert.valid()}};
  if (cert.massless) {
    j["growth"] = json{{"alpha", cert.growth.alpha},
                       {"beta", cert.growth.beta},
                       {"margin", cert.growth.margin},
                       {"valid", cert.growth.valid}};
  }
  return j;
}

nlohmann::json verification_json(const VerificationReport& report) {
  json checks = json::array();
  for (const HypothesisCheck& c : report.checks)
    checks.push_back(json{{"name", c.name},
                          {"margin", c.margin},
                          {"worst_t", c.worst_t},
                          {"pass", c.pass}});
  json rows = json::array();
  for (const VerifyRow& r : report.rows)
    rows.push_back(json{{"t", r.t},
                        {"m", r.m},
                        {"n", r.n},
                        {"windows", r.windows},
                        {"sigma_hat", r.sigma_hat}});
  return json{{"schema_version", "dkg.verification.v1"},
              {"sigma", report.sigma},
              {"T", report.T},
              {"aborted", report.aborted},
              {"abort_reason", report.abort_reason},
              {"checks", checks},
              {"rows", rows},
              {"pass", report.pass}};
}

}  // namespace dkg
