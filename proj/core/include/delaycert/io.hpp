#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "delaycert/freqcheck.hpp"
#include "delaycert/goodwin.hpp"
#include "delaycert/nonlinearity.hpp"
#include "delaycert/simulate.hpp"
#include "delaycert/smalldelay.hpp"
#include "delaycert/spectrum.hpp"
#include "delaycert/system.hpp"

namespace delaycert::io {

struct SystemFile {
  DelaySystem system;
  std::optional<Nonlinearity> nonlinearity;
};

// JSON system description. Matrices are row-major, either flat or as a
// list of rows. Throws ConfigError on malformed input.
SystemFile parse_system(const std::string& text);
SystemFile load_system(const std::string& path);

// Writes every double with enough digits to read back bit-exactly.
std::string dump_system(const SystemFile& file);
void save_system(const SystemFile& file, const std::string& path);

std::string certificate_json(const Certificate& cert);
std::string root_count_json(const RootCount& count);
std::string small_delay_json(const SmallDelayReport& report);
std::string goodwin_point_json(const goodwin::Point& point);

// "key: value" lines for terminal output.
std::string certificate_text(const Certificate& cert);
std::string root_count_text(const RootCount& count);
std::string small_delay_text(const SmallDelayReport& report);
std::string goodwin_point_text(const goodwin::Point& point);

// t, x_1..x_n at every grid node, 17 significant digits.
void write_trace_csv(std::ostream& out, const Trace& trace);

// tau, lambda, certified, rho_star, margin, reason.
void write_region_csv(std::ostream& out, const std::vector<goodwin::RegionRow>& rows);

// Minimal heatmap of the certified indicator: lambda rows, tau columns.
void write_region_svg(std::ostream& out, const std::vector<goodwin::RegionRow>& rows);

// %.17g formatting.
std::string format_double(double value);

}  // namespace delaycert::io
