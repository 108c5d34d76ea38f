// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <fstream>
#include <sstream>

#include "tfront/common.hpp"
#include "tfront/signal_io.hpp"

namespace tfront {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("manifest: bad integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string_view task_name(Task task) { return task == Task::Kws ? "kws" : "asr"; }

Task parse_task(std::string_view name) {
  if (name == "kws") return Task::Kws;
  if (name == "asr") return Task::Asr;
  throw ArgumentError("unknown task '" + std::string(name) + "' (expected kws or asr)");
}

std::vector<std::string> kws_class_names() {
  return {"down", "go", "left", "no", "off", "on", "right", "stop", "up", "yes", "unknown", "silence"};
}

std::vector<std::string> asr_class_names() {
  std::vector<std::string> names;
  for (int i = 0; i < kPhonemes; ++i) names.push_back("ph" + std::to_string(i));
  names.emplace_back("blank");
  return names;
}

std::string format_manifest(const DatasetManifest& manifest) {
  std::ostringstream out;
  out << "# classes: ";
  for (std::size_t i = 0; i < manifest.class_names.size(); ++i) {
    out << (i ? "," : "") << manifest.class_names[i];
  }
  out << "\n# task: " << task_name(manifest.task) << "\n";
  for (const auto& e : manifest.entries) {
    out << e.source << ",";
    if (manifest.task == Task::Kws) {
      out << e.label.class_index;
    } else {
      for (std::size_t i = 0; i < e.label.symbols.size(); ++i) out << (i ? " " : "") << e.label.symbols[i];
    }
    out << "\n";
  }
  return out.str();
}

DatasetManifest parse_manifest(std::string_view text) {
  DatasetManifest m;
  bool have_classes = false;
  bool have_task = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.starts_with("# classes:")) {
      m.class_names = split(line.substr(10), ',');
      have_classes = true;
      continue;
    }
    if (line.starts_with("# task:")) {
      m.task = parse_task(trim(line.substr(7)));
      have_task = true;
      continue;
    }
    if (line.front() == '#') continue;
    if (!have_classes) throw FormatError("manifest: missing '# classes:' header");
    const auto comma = line.rfind(',');
    if (comma == std::string_view::npos) {
      throw FormatError("manifest: line " + std::to_string(line_no) + " has no label");
    }
    ManifestEntry e;
    e.source = std::string(trim(line.substr(0, comma)));
    const std::string_view label = trim(line.substr(comma + 1));
    if (!have_task) {
      // Sequence labels or a 62-entry inventory imply ASR.
      m.task = (label.find(' ') != std::string_view::npos || m.class_names.size() == kAsrClasses)
                   ? Task::Asr
                   : Task::Kws;
      have_task = true;
    }
    if (m.task == Task::Kws) {
      e.label.class_index = parse_int(label);
      if (e.label.class_index < 0 || e.label.class_index >= m.num_classes()) {
        throw FormatError("manifest: label index out of range on line " + std::to_string(line_no));
      }
    } else {
      for (const auto& tok : split(label, ' ')) {
        if (tok.empty()) continue;
        const int sym = parse_int(tok);
        if (sym < 0 || sym >= m.num_classes()) {
          throw FormatError("manifest: symbol out of range on line " + std::to_string(line_no));
        }
        e.label.symbols.push_back(sym);
      }
    }
    m.entries.push_back(std::move(e));
  }
  if (!have_classes) throw FormatError("manifest: missing '# classes:' header");
  return m;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str());
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest " + path.string());
  out << format_manifest(manifest);
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<WaveformClip> load_clips(const DatasetManifest& manifest,
                                     const std::filesystem::path& base_dir) {
  std::vector<WaveformClip> clips;
  clips.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) {
    WaveformClip clip;
    if (e.source.starts_with("synth:")) {
      clip = synth_from_recipe(e.source);
    } else {
      std::filesystem::path p(e.source);
      if (p.is_relative()) p = base_dir / p;
      clip = resample_to_16k(read_wav(p));
    }
    if (manifest.task == Task::Kws) clip.samples = fix_length(std::move(clip.samples), kKwsClipSamples);
    clip.label = e.label;
    clips.push_back(std::move(clip));
  }
  return clips;
}

}  // namespace tfront
