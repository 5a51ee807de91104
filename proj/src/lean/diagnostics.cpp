#include "bridge/lean/diagnostics.hpp"
#include "bridge/util/text.hpp"

#include <regex>

namespace bridge::lean {

std::string_view to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

std::vector<Diagnostic> parse_diagnostics(std::string_view output) {
  static const std::regex header(R"(^(.+?):(\d+):(\d+): (error|warning|info|information): ?(.*)$)");
  std::vector<Diagnostic> out;
  bool collecting = false;  // false after an info header, so its body is dropped too
  for (const auto& line : text::split_lines(output)) {
    std::smatch m;
    if (std::regex_match(line, m, header)) {
      std::string sev = m[4];
      collecting = sev == "error" || sev == "warning";
      if (!collecting) continue;
      Diagnostic d;
      d.file = m[1];
      d.line = std::max(1, std::stoi(m[2]));
      d.column = std::stoi(m[3]);
      d.severity = sev == "error" ? Severity::Error : Severity::Warning;
      d.message = m[5];
      out.push_back(std::move(d));
      continue;
    }
    if (collecting && !out.empty()) {
      auto& msg = out.back().message;
      if (msg.empty()) msg = line;
      else msg += "\n" + line;
    }
  }
  for (auto& d : out) {
    while (!d.message.empty() && (d.message.back() == '\n' || d.message.back() == ' ')) d.message.pop_back();
    if (d.message.empty()) d.message = "(empty message)";
  }
  return out;
}

std::string format(const Diagnostic& d) {
  return d.file + ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
         std::string(to_string(d.severity)) + ": " + d.message;
}

}  // namespace bridge::lean
