#include "bridge/prompt/extract.hpp"
#include "bridge/util/text.hpp"

#include <cctype>
#include <optional>

namespace bridge::prompt {

namespace {

struct Line {
  std::size_t start;  // offset of first char
  std::size_t end;    // offset of '\n' (or text end)
};

std::vector<Line> line_offsets(std::string_view s) {
  std::vector<Line> lines;
  std::size_t start = 0;
  while (start < s.size()) {
    auto nl = s.find('\n', start);
    std::size_t end = nl == std::string_view::npos ? s.size() : nl;
    lines.push_back({start, end});
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

bool is_fence(std::string_view line) {
  return text::starts_with(text::trim(line), "```");
}

std::vector<ExtractedArtifact> extract_python(std::string_view completion) {
  static constexpr std::string_view kOpen = "<python>";
  static constexpr std::string_view kClose = "</python>";
  std::vector<ExtractedArtifact> out;
  std::size_t pos = 0;
  while (true) {
    auto open = completion.find(kOpen, pos);
    if (open == std::string_view::npos) break;
    std::size_t body_start = open + kOpen.size();
    auto close = completion.find(kClose, body_start);
    if (close == std::string_view::npos) break;
    std::string_view body = completion.substr(body_start, close - body_start);
    if (!text::trim(body).empty())
      out.push_back({ArtifactKind::PythonSource, std::string(body), {body_start, close}});
    pos = close + kClose.size();
  }
  return out;
}

/// Span of the last complete, non-empty fenced block.
bool last_fenced_block(std::string_view completion, Span& span) {
  auto lines = line_offsets(completion);
  bool found = false;
  std::optional<std::size_t> open_line;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = completion.substr(lines[i].start, lines[i].end - lines[i].start);
    if (!is_fence(line)) continue;
    if (!open_line) {
      open_line = i;
      continue;
    }
    std::size_t body_start = lines[*open_line].end + 1;
    std::size_t body_end = lines[i].start > 0 ? lines[i].start - 1 : 0;
    if (body_end > body_start && !text::trim(completion.substr(body_start, body_end - body_start)).empty()) {
      span = {body_start, body_end};
      found = true;
    }
    open_line.reset();
  }
  return found;
}

bool import_region(std::string_view completion, Span& span) {
  for (const auto& line : line_offsets(completion)) {
    if (text::starts_with(completion.substr(line.start, line.end - line.start), "import Std")) {
      std::size_t end = completion.size();
      while (end > line.start && std::isspace(static_cast<unsigned char>(completion[end - 1]))) --end;
      span = {line.start, end};
      return true;
    }
  }
  return false;
}

std::vector<ExtractedArtifact> extract_lean(std::string_view completion) {
  Span span;
  if (!last_fenced_block(completion, span) && !import_region(completion, span)) return {};
  std::vector<ExtractedArtifact> out;
  std::string_view body = completion.substr(span.start, span.end - span.start);
  // Prose ahead of the code (reasoning stage, literate manuscript) is kept as narrative.
  std::size_t narrative_end = span.start;
  std::size_t prev_nl = narrative_end > 0 ? completion.rfind('\n', narrative_end - 1) : std::string_view::npos;
  if (prev_nl != std::string_view::npos && prev_nl + 1 == narrative_end) {
    std::size_t line_start = prev_nl == 0 ? 0 : completion.rfind('\n', prev_nl - 1);
    line_start = line_start == std::string_view::npos ? 0 : line_start + 1;
    if (is_fence(completion.substr(line_start, prev_nl - line_start))) narrative_end = line_start;
  } else if (prev_nl == std::string_view::npos && narrative_end > 0 &&
             is_fence(completion.substr(0, narrative_end))) {
    narrative_end = 0;
  }
  std::string_view narrative = completion.substr(0, narrative_end);
  if (!text::trim(narrative).empty())
    out.push_back({ArtifactKind::Narrative, std::string(narrative), {0, narrative_end}});
  out.push_back({ArtifactKind::LeanSource, std::string(body), span});
  for (const auto& t : theorem_spans(body)) {
    out.push_back({ArtifactKind::TheoremBlock, std::string(body.substr(t.start, t.end - t.start)),
                   {span.start + t.start, span.start + t.end}});
  }
  return out;
}

bool word_at(std::string_view line, std::size_t pos, std::string_view word) {
  if (line.substr(pos, word.size()) != word) return false;
  std::size_t end = pos + word.size();
  return end == line.size() || std::isspace(static_cast<unsigned char>(line[end]));
}

/// Offset of the `theorem` keyword when `line` opens a theorem declaration, else npos.
std::size_t theorem_keyword(std::string_view line) {
  std::size_t pos = 0;
  if (line.substr(0, 2) == "@[") {
    auto close = line.find(']');
    if (close == std::string_view::npos) return std::string_view::npos;
    pos = close + 1;
  }
  while (true) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    bool modifier = false;
    for (std::string_view m : {"private", "protected", "noncomputable", "nonrec"}) {
      if (word_at(line, pos, m)) {
        pos += m.size();
        modifier = true;
        break;
      }
    }
    if (!modifier) break;
  }
  return word_at(line, pos, "theorem") ? pos : std::string_view::npos;
}

/// Updates the nested block-comment depth across one line.
void scan_comments(std::string_view line, int& depth) {
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    char a = line[i];
    char b = line[i + 1];
    if (depth == 0 && a == '-' && b == '-') return;
    if (depth == 0 && a == '"') {
      ++i;
      while (i < line.size() && line[i] != '"') {
        if (line[i] == '\\') ++i;
        ++i;
      }
      continue;
    }
    if (a == '/' && b == '-') {
      ++depth;
      ++i;
    } else if (a == '-' && b == '/' && depth > 0) {
      --depth;
      ++i;
    }
  }
}

bool starts_top_level_item(std::string_view line) {
  if (line.empty()) return false;
  unsigned char c = static_cast<unsigned char>(line.front());
  return std::isalpha(c) || c == '@' || c == '#' || c == '/' || c == '-' || c == '_';
}

}  // namespace

std::string_view to_string(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::LeanSource: return "LeanSource";
    case ArtifactKind::PythonSource: return "PythonSource";
    case ArtifactKind::TheoremBlock: return "TheoremBlock";
    case ArtifactKind::Narrative: return "Narrative";
  }
  return "?";
}

std::vector<Span> theorem_spans(std::string_view lean) {
  std::vector<Span> spans;
  auto lines = line_offsets(lean);
  int depth = 0;
  std::optional<std::size_t> open_start;
  auto close_at = [&](std::size_t end) {
    while (end > *open_start && std::isspace(static_cast<unsigned char>(lean[end - 1]))) --end;
    spans.push_back({*open_start, end});
    open_start.reset();
  };
  for (const auto& ln : lines) {
    std::string_view line = lean.substr(ln.start, ln.end - ln.start);
    bool in_comment = depth > 0;
    scan_comments(line, depth);
    if (in_comment) continue;
    if (open_start && starts_top_level_item(line)) close_at(ln.start);
    if (!open_start && theorem_keyword(line) != std::string_view::npos) open_start = ln.start;
  }
  if (open_start) close_at(lean.size());
  return spans;
}

std::vector<ExtractedArtifact> try_extract(std::string_view completion, Domain domain) {
  return domain == Domain::Spec ? extract_python(completion) : extract_lean(completion);
}

std::vector<ExtractedArtifact> extract_artifacts(std::string_view completion, Domain domain) {
  auto out = try_extract(completion, domain);
  if (!primary_artifact(out, domain))
    throw ExtractionError(std::string("no artifact found for domain ") + std::string(to_string(domain)));
  return out;
}

const ExtractedArtifact* primary_artifact(const std::vector<ExtractedArtifact>& artifacts, Domain domain) {
  ArtifactKind want = domain == Domain::Spec ? ArtifactKind::PythonSource : ArtifactKind::LeanSource;
  const ExtractedArtifact* found = nullptr;
  for (const auto& a : artifacts)
    if (a.kind == want) found = &a;
  return found;
}

}  // namespace bridge::prompt
