#pragma once

// Artifact serialization. CSV files open with a versioned schema comment
// line; JSON documents carry a schema_version field. Numbers are written
// with %.17g so artifacts round-trip bit-exactly and identical runs produce
// byte-identical files.

#include <string>
#include <vector>

#include "json.hpp"

#include "dkg/certify.hpp"
#include "dkg/estimates.hpp"
#include "dkg/picard.hpp"
#include "dkg/stepper.hpp"

namespace dkg {

std::string format_double(double x);

void write_text_file(const std::string& path, const std::string& body);

std::string ledger_csv(const NormLedger& ledger);
std::string radius_curve_csv(const std::vector<RadiusPoint>& points);
std::string ratio_reports_csv(const std::vector<RatioReport>& reports);

nlohmann::json constants_json(const CalibratedConstants& consts);
CalibratedConstants constants_from_json_text(const std::string& text);

nlohmann::json calibration_json(const CalibrationReport& report);
nlohmann::json picard_json(const PicardDiagnostics& diag);
nlohmann::json ratio_report_json(const RatioReport& report);
nlohmann::json symbol_report_json(const SymbolBoundReport& report);
nlohmann::json charge_derivative_json(const ChargeDerivativeReport& report);
nlohmann::json almost_conservation_json(const AlmostConservationReport& report);
nlohmann::json certificate_json(const Certificate& cert);
nlohmann::json verification_json(const VerificationReport& report);

}  // namespace dkg
