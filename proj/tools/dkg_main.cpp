// Scenario-driven front end. One scenario file per invocation; each
// subcommand writes its artifacts into the output directory and returns
// 0 on success, 1 when a run or check fails, 2 on validation problems.
// Failures also print a single-line machine-readable JSON error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dkg/artifacts.hpp"
#include "dkg/certify.hpp"
#include "dkg/estimates.hpp"
#include "dkg/gevrey.hpp"
#include "dkg/picard.hpp"
#include "dkg/scenario.hpp"
#include "dkg/stepper.hpp"
#include "dkg/types.hpp"

namespace {

using dkg::ValidationError;
using nlohmann::json;

constexpr double kChargeResidualTol = 1e-5;

void emit_error(const std::string& subcommand, int code,
                const std::string& message) {
  json j{{"error",
          {{"code", code}, {"subcommand", subcommand}, {"message", message}}}};
  std::printf("%s\n", j.dump().c_str());
  std::fprintf(stderr, "error: %s\n", message.c_str());
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

dkg::CalibratedConstants resolve_constants(const dkg::Scenario& s,
                                           const std::string& constants_path) {
  if (!constants_path.empty())
    return dkg::constants_from_json_text(read_file(constants_path));
  if (s.has_constants) return s.consts;
  throw ValidationError(
      "no calibrated constants: pass --constants or add a constants section "
      "to the scenario");
}

struct RunContext {
  dkg::Scenario scenario;
  std::string out_dir;
  std::string constants_path;
};

int run_evolve(const RunContext& ctx) {
  const dkg::Scenario& s = ctx.scenario;
  dkg::GridPtr grid = dkg::scenario_grid(s);
  dkg::CauchyData data = dkg::scenario_data(s, grid);
  dkg::RhsWork work(grid);

  dkg::NormLedger ledger;
  ledger.sigma = s.sigma0;
  ledger.massless = s.masses.kg == dkg::Masses::Kg::zero;
  dkg::EvolveOptions opts;
  opts.probe_interval = s.probe_interval;
  opts.observer = dkg::ledger_observer(ledger);

  bool aborted = false;
  std::string abort_reason;
  try {
    dkg::evolve(dkg::split_data(data, s.masses), s.horizon, s.dt, work, opts);
  } catch (const dkg::SolverAbort& e) {
    aborted = true;
    abort_reason = e.what();
  }
  dkg::write_text_file(join_path(ctx.out_dir, "evolve.csv"),
                       dkg::ledger_csv(ledger));
  if (aborted) {
    emit_error("evolve", 1, "run aborted: " + abort_reason);
    return 1;
  }
  double drift = 0.0;
  if (!ledger.rows.empty() && ledger.rows.front().charge > 0.0) {
    for (const dkg::LedgerRow& r : ledger.rows)
      drift = std::max(drift,
                       std::abs(r.charge / ledger.rows.front().charge - 1.0));
  }
  std::printf("evolve: %zu probes to t=%s, charge drift %s -> evolve.csv\n",
              ledger.rows.size(),
              dkg::format_double(ledger.rows.empty() ? 0.0
                                                     : ledger.rows.back().t)
                  .c_str(),
              dkg::format_double(drift).c_str());
  return 0;
}

int run_radius(const RunContext& ctx) {
  const dkg::Scenario& s = ctx.scenario;
  if (s.t_list.empty())
    throw ValidationError("radius.t_list: scenario provides no target times");
  dkg::GridPtr grid = dkg::scenario_grid(s);
  dkg::CauchyData data = dkg::scenario_data(s, grid);
  dkg::RhsWork work(grid);

  dkg::CertificateInputs proto;
  proto.sigma0 = s.sigma0;
  proto.masses = s.masses;
  proto.consts = resolve_constants(s, ctx.constants_path);

  std::vector<dkg::RadiusPoint> curve =
      dkg::radius_curve(data, proto, s.t_list, s.dt, work);
  dkg::write_text_file(join_path(ctx.out_dir, "radius.csv"),
                       dkg::radius_curve_csv(curve));

  int claims = 0, failures = 0;
  for (const dkg::RadiusPoint& p : curve) {
    if (!p.certificate_valid) continue;
    ++claims;
    if (!p.pass) ++failures;
  }
  std::printf("radius: %zu points, %d certified, %d failed -> radius.csv\n",
              curve.size(), claims, failures);
  return failures == 0 ? 0 : 1;
}

int run_picard(const RunContext& ctx, bool do_calibrate) {
  const dkg::Scenario& s = ctx.scenario;
  dkg::GridPtr grid = dkg::scenario_grid(s);
  dkg::RhsWork work(grid);

  if (do_calibrate) {
    dkg::CalibrationReport rep = dkg::calibrate(
        s.masses.dirac, dkg::calibration_samples(grid), s.sigma0, work);
    dkg::write_text_file(join_path(ctx.out_dir, "constants.json"),
                         dkg::constants_json(rep.consts).dump(2) + "\n");
    dkg::write_text_file(join_path(ctx.out_dir, "calibration.json"),
                         dkg::calibration_json(rep).dump(2) + "\n");
    std::printf(
        "picard: calibrated c0=%s C=%s -> constants.json, calibration.json\n",
        dkg::format_double(rep.consts.c0).c_str(),
        dkg::format_double(rep.consts.C).c_str());
    return 0;
  }

  dkg::CauchyData data = dkg::scenario_data(s, grid);
  dkg::CalibratedConstants consts = resolve_constants(s, ctx.constants_path);
  auto [path, diag] =
      dkg::run_contraction(data, s.masses, s.sigma0, consts, work);
  dkg::write_text_file(join_path(ctx.out_dir, "picard.json"),
                       dkg::picard_json(diag).dump(2) + "\n");
  std::printf("picard: delta=%s iterations=%d converged=%d -> picard.json\n",
              dkg::format_double(diag.delta).c_str(), diag.iterations,
              diag.converged);
  if (!diag.converged) {
    emit_error("picard", 1, "fixed-point iteration did not contract");
    return 1;
  }
  return 0;
}

int run_checks(const RunContext& ctx) {
  const dkg::Scenario& s = ctx.scenario;
  dkg::GridPtr grid = dkg::scenario_grid(s);
  dkg::CauchyData data = dkg::scenario_data(s, grid);
  dkg::RhsWork work(grid);
  dkg::CalibratedConstants consts = resolve_constants(s, ctx.constants_path);

  std::vector<dkg::RatioReport> rows;
  bool all_pass = true;
  json root{{"schema_version", "dkg.checks.v1"}, {"scenario", s.name}};

  json null_forms = json::array();
  json controls = json::array();
  json products = json::array();
  for (const dkg::SamplePair& pair : dkg::standard_sample_pairs(grid)) {
    for (double sigma : s.checks.sigmas) {
      std::vector<dkg::RatioReport> reps = dkg::check_null_form_gevrey(
          pair.f, pair.g, sigma, s.checks.horizons, s.checks.pass_constant, {});
      for (dkg::RatioReport& r : reps) {
        r.sample = pair.id;
        all_pass = all_pass && r.pass;
        null_forms.push_back(dkg::ratio_report_json(r));
        rows.push_back(std::move(r));
      }
      if (sigma > 0.0) {
        dkg::RatioReport sp = dkg::check_sobolev_product(
            pair.f, pair.g, sigma, s.checks.pass_constant);
        sp.sample = pair.id;
        all_pass = all_pass && sp.pass;
        products.push_back(dkg::ratio_report_json(sp));
        rows.push_back(std::move(sp));
      }
    }
    // growth control: same quadrature without the opposing propagation
    // directions; reported but never gates the exit status
    std::vector<dkg::RatioReport> ctl = dkg::check_parallel_control(
        pair.f, pair.g, s.checks.horizons, s.checks.pass_constant, {});
    for (dkg::RatioReport& r : ctl) {
      r.sample = pair.id;
      controls.push_back(dkg::ratio_report_json(r));
      rows.push_back(std::move(r));
    }
  }
  root["null_forms"] = null_forms;
  root["parallel_controls"] = controls;
  root["products"] = products;

  double sigma_max = s.sigma0;
  double sigma_ac = 0.0;
  for (double sg : s.checks.sigmas) {
    sigma_max = std::max(sigma_max, sg);
    if (sg > 0.0) sigma_ac = sigma_ac == 0.0 ? sg : std::min(sigma_ac, sg);
  }
  dkg::SymbolBoundReport symbol =
      dkg::check_symbol_bound(grid, sigma_max, s.seed, s.checks.random_draws);
  all_pass = all_pass && symbol.pass;
  root["symbol_bound"] = dkg::symbol_report_json(symbol);

  json charge = json::array();
  double t_center = 16.0 * s.dt;
  double sigma_cd = sigma_ac > 0.0 ? sigma_ac : 0.2;
  for (int eps : {-1, 1}) {
    dkg::ChargeDerivativeReport cd = dkg::check_charge_derivative(
        data, s.masses, sigma_cd, eps, t_center, s.dt, work);
    all_pass = all_pass && cd.residual_rel <= kChargeResidualTol;
    charge.push_back(dkg::charge_derivative_json(cd));
  }
  root["charge_derivative"] = charge;

  json windows = json::array();
  for (double sigma : s.checks.sigmas) {
    if (!(sigma > 0.0)) continue;
    dkg::AlmostConservationReport ac =
        dkg::check_almost_conservation(data, s.masses, sigma, consts, work);
    for (const dkg::RatioReport* r :
         {&ac.mest, &ac.nest, &ac.ib1_plus, &ac.ib1_minus, &ac.ib2_plus,
          &ac.ib2_minus}) {
      all_pass = all_pass && r->pass;
      rows.push_back(*r);
    }
    windows.push_back(dkg::almost_conservation_json(ac));
  }
  root["windows"] = windows;
  root["pass"] = all_pass;

  dkg::write_text_file(join_path(ctx.out_dir, "checks.json"),
                       root.dump(2) + "\n");
  dkg::write_text_file(join_path(ctx.out_dir, "checks.csv"),
                       dkg::ratio_reports_csv(rows));
  std::printf("checks: %zu summary rows, pass=%d -> checks.json, checks.csv\n",
              rows.size(), all_pass);
  if (!all_pass) {
    emit_error("checks", 1, "one or more estimate checks failed");
    return 1;
  }
  return 0;
}

int run_certify(const RunContext& ctx) {
  const dkg::Scenario& s = ctx.scenario;
  dkg::CalibratedConstants consts = resolve_constants(s, ctx.constants_path);
  const bool massless = s.masses.kg == dkg::Masses::Kg::zero;

  dkg::GridPtr grid;
  dkg::CauchyData data;
  dkg::RhsWork* work = nullptr;
  dkg::RhsWork work_storage{nullptr};
  auto ensure_data = [&]() {
    if (grid) return;
    grid = dkg::scenario_grid(s);
    data = dkg::scenario_data(s, grid);
    work_storage = dkg::RhsWork(grid);
    work = &work_storage;
  };

  dkg::CertificateInputs in;
  if (s.certify.explicit_inputs) {
    in.sigma0 = s.sigma0;
    in.m0 = s.certify.m0;
    in.n0 = s.certify.n0;
    in.T = s.horizon;
    in.masses = s.masses;
    in.consts = consts;
  } else {
    ensure_data();
    in = dkg::inputs_from_data(data, s.masses, s.sigma0, consts, s.horizon);
  }

  dkg::Certificate cert;
  if (massless) {
    ensure_data();
    dkg::GrowthEnvelope env =
        dkg::fit_growth_envelope(data, s.masses, s.horizon, s.dt, *work);
    cert = dkg::m0_certified_radius(in, env);
  } else {
    cert = dkg::certified_radius(in);
  }
  dkg::write_text_file(join_path(ctx.out_dir, "certificate.json"),
                       dkg::certificate_json(cert).dump(2) + "\n");
  std::printf("certify: sigma_cert=%s valid=%d -> certificate.json\n",
              dkg::format_double(cert.sigma_cert).c_str(), cert.valid());

  if (!cert.valid()) {
    emit_error("certify", 1, "certificate invalid: largeness or cap condition failed");
    return 1;
  }
  if (!s.certify.verify) return 0;

  ensure_data();
  dkg::VerifyOptions vo;
  vo.dt = s.dt;
  vo.probes = s.certify.probes;
  vo.sigma_override = s.certify.sigma_override;
  dkg::VerificationReport rep = dkg::verify_certificate(data, cert, vo, *work);
  dkg::write_text_file(join_path(ctx.out_dir, "verification.json"),
                       dkg::verification_json(rep).dump(2) + "\n");
  std::printf("certify: verification pass=%d over %zu probes -> verification.json\n",
              rep.pass, rep.rows.size());
  if (!rep.pass) {
    emit_error("certify", 1,
               rep.aborted ? "verification run aborted: " + rep.abort_reason
                           : "a bookkeeping hypothesis failed");
    return 1;
  }
  return 0;
}

struct ReportLine {
  std::string file;
  std::string detail;
  int pass = 1;  // 1 pass, 0 fail, -1 informational
};

void report_csv(const std::string& path, const std::string& text,
                std::vector<ReportLine>& lines) {
  std::istringstream in(text);
  std::string schema, header, line;
  std::getline(in, schema);
  std::getline(in, header);
  std::vector<std::string> cols;
  {
    std::istringstream hs(header);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  int pass_col = -1, valid_col = -1;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == "pass") pass_col = static_cast<int>(i);
    if (cols[i] == "certificate_valid") valid_col = static_cast<int>(i);
  }

  std::size_t rows = 0, failures = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    if (pass_col < 0) continue;
    std::istringstream ls(line);
    std::string cell;
    // growth-control rows and points without a certified claim do not gate
    bool gates = true;
    bool failed = false;
    for (int i = 0; std::getline(ls, cell, ','); ++i) {
      if (i == 0 && cell == "parallel_control") gates = false;
      if (i == valid_col && cell == "0") gates = false;
      if (i == pass_col && cell == "0") failed = true;
    }
    if (gates && failed) ++failures;
  }
  ReportLine out;
  out.file = path;
  if (rows == 0) {
    out.detail = "no samples";
    out.pass = -1;
  } else if (pass_col < 0) {
    out.detail = std::to_string(rows) + " rows";
    out.pass = -1;
  } else {
    out.detail = std::to_string(rows) + " rows, " + std::to_string(failures) +
                 " failed";
    out.pass = failures == 0 ? 1 : 0;
  }
  lines.push_back(out);
}

void report_json(const std::string& path, const std::string& text,
                 std::vector<ReportLine>& lines) {
  json j = json::parse(text);
  ReportLine out;
  out.file = path;
  std::string schema = j.value("schema_version", "");
  if (j.contains("pass") && j.at("pass").is_boolean()) {
    out.pass = j.at("pass").get<bool>() ? 1 : 0;
    out.detail = schema + (out.pass ? ": pass" : ": fail");
  } else if (j.contains("valid") && j.at("valid").is_boolean()) {
    out.pass = j.at("valid").get<bool>() ? 1 : 0;
    out.detail = schema + (out.pass ? ": valid" : ": invalid");
  } else if (j.contains("converged") && j.at("converged").is_boolean()) {
    out.pass = j.at("converged").get<bool>() ? 1 : 0;
    out.detail = schema + (out.pass ? ": converged" : ": not converged");
  } else {
    out.detail = schema.empty() ? "unrecognized document" : schema;
    out.pass = -1;
  }
  lines.push_back(out);
}

int run_report(const std::vector<std::string>& files) {
  std::vector<ReportLine> lines;
  for (const std::string& f : files) {
    std::string text = read_file(f);
    if (!text.empty() && text[0] == '{')
      report_json(f, text, lines);
    else if (!text.empty() && text[0] == '#')
      report_csv(f, text, lines);
    else
      throw ValidationError(f + ": unrecognized artifact (no schema marker)");
  }
  bool any_fail = false;
  for (const ReportLine& l : lines) {
    const char* tag = l.pass == 1 ? "PASS" : l.pass == 0 ? "FAIL" : "----";
    std::printf("%s  %-18s %s\n", tag, l.detail.c_str(), l.file.c_str());
    if (l.pass == 0) any_fail = true;
  }
  if (lines.empty()) std::printf("no artifacts given\n");
  return any_fail ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gevrey-norm evolution, local solver and radius certificates "
               "for the split Dirac-Klein-Gordon system"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, constants_path;
  std::uint64_t seed = 0;
  bool seed_set = false, calibrate_flag = false;
  std::vector<std::string> report_files;

  app.add_option("--out", out_dir, "output directory for artifacts");
  app.add_option("--constants", constants_path,
                 "calibrated constants JSON (overrides the scenario)");
  app.add_option("--seed", seed, "override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });

  CLI::App* evolve = app.add_subcommand("evolve", "run and write the norm ledger");
  CLI::App* radius = app.add_subcommand("radius", "certified vs measured radius curve");
  CLI::App* picard = app.add_subcommand("picard", "local fixed-point diagnostics");
  picard->add_flag("--calibrate", calibrate_flag,
                   "measure the constants instead of running the solver");
  CLI::App* checks = app.add_subcommand("checks", "bilinear, symbol and window checks");
  CLI::App* certify = app.add_subcommand("certify", "certificate arithmetic and verification");
  CLI::App* report = app.add_subcommand("report", "summarize artifact files");
  report->add_option("files", report_files, "artifact files to summarize");

  for (CLI::App* sub : {evolve, radius, picard, checks, certify})
    sub->add_option("--scenario", scenario_path, "scenario JSON")->required();
  for (CLI::App* sub : {evolve, radius, picard, checks, certify, report})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (sub == "report") return run_report(report_files);

    RunContext ctx;
    ctx.scenario = dkg::load_scenario(scenario_path);
    if (seed_set) ctx.scenario.seed = seed;
    ctx.constants_path = constants_path;
    if (const char* env = std::getenv("DKG_OUT_DIR"); env && out_dir.empty())
      out_dir = env;
    ctx.out_dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(ctx.out_dir);

    if (sub == "evolve") return run_evolve(ctx);
    if (sub == "radius") return run_radius(ctx);
    if (sub == "picard") return run_picard(ctx, calibrate_flag);
    if (sub == "checks") return run_checks(ctx);
    if (sub == "certify") return run_certify(ctx);
    emit_error(sub, 2, "unknown subcommand");
    return 2;
  } catch (const ValidationError& e) {
    emit_error(sub, 2, e.what());
    return 2;
  } catch (const dkg::SolverAbort& e) {
    emit_error(sub, 1, e.what());
    return 1;
  } catch (const json::exception& e) {
    emit_error(sub, 2, e.what());
    return 2;
  }
}
