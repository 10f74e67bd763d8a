#pragma once

// Command-line front end.  run() is the whole program minus main(), so
// tests can drive it in-process.
//
// Exit codes: 0 ok, 1 a check failed, 2 bad arguments or precondition,
// 3 disconnected double cover under --require-connected.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "teich/report.hpp"
#include "teich/torus.hpp"

namespace teich::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDisconnected = 3;

inline constexpr const char* kSchemaVersion = "1";

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "re,im" -> complex.  Throws DomainError.
cplx parse_complex(const std::string& s);
/// "a,b" -> foliation.  Throws DomainError.
torus::Foliation parse_foliation(const std::string& s);

/// 15 significant digits.
std::string format_number(double x);

nlohmann::json report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);

/// One line per result plus an overall verdict; used for both the console
/// summary and for re-rendering a saved report file.
std::string summarize(const nlohmann::json& report_file);

/// Names accepted by `verify`, without "all".
const std::vector<std::string>& suite_names();

/// Directory with the shipped gluing files.
std::filesystem::path default_data_dir();

}  // namespace teich::cli
