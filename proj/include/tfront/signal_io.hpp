// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tfront {

enum class Task { Kws, Asr };

std::string_view task_name(Task task);
Task parse_task(std::string_view name);

// KWS clips carry a class index, ASR clips a phoneme-index sequence. The
// unused member stays empty / -1.
struct ClipLabel {
  int class_index = -1;
  std::vector<int> symbols;

  bool operator==(const ClipLabel&) const = default;
};

struct WaveformClip {
  std::vector<double> samples;
  int sample_rate_hz = 16000;
  ClipLabel label;
};

struct ManifestEntry {
  std::string source;  // file path (relative to the manifest) or "synth:..." recipe
  ClipLabel label;
};

struct DatasetManifest {
  Task task = Task::Kws;
  std::vector<std::string> class_names;
  std::vector<ManifestEntry> entries;

  int num_classes() const { return static_cast<int>(class_names.size()); }
};

// KWS: the ten keywords, then "unknown" and "silence".
inline constexpr int kKwsClasses = 12;
inline constexpr int kKwsUnknown = 10;
inline constexpr int kKwsSilence = 11;
inline constexpr int kKwsClipSamples = 16000;
// ASR: 61 phoneme symbols plus the CTC blank (last index).
inline constexpr int kPhonemes = 61;
inline constexpr int kAsrClasses = kPhonemes + 1;
inline constexpr int kBlank = kPhonemes;

std::vector<std::string> kws_class_names();
std::vector<std::string> asr_class_names();

// --- WAV ---------------------------------------------------------------

// RIFF/WAVE with PCM 8/16/24/32-bit integer or 32-bit float payloads.
// Channels are averaged to mono; integers are scaled by the type's maximum
// magnitude (8-bit is unsigned with offset 128).
WaveformClip parse_wav(std::span<const std::uint8_t> bytes);
WaveformClip read_wav(const std::filesystem::path& path);

// 16-bit PCM mono writer, used by `synth --wav` and the parser tests.
std::vector<std::uint8_t> encode_wav_pcm16(std::span<const double> samples, int sample_rate_hz);

// --- resampling --------------------------------------------------------

// Polyphase windowed-sinc resampler (Kaiser beta 8.6, 32 taps per phase).
// Output length is floor(n * 16000 / rate); samples are clamped to [-1, 1].
WaveformClip resample_to_16k(const WaveformClip& clip);

// Zero-pads at the end or truncates.
std::vector<double> fix_length(std::vector<double> samples, std::size_t length);

// --- synthetic toy data ------------------------------------------------

struct Dataset {
  DatasetManifest manifest;
  std::vector<WaveformClip> clips;  // parallel to manifest.entries
};

// KWS: n_per_class clips for each of the 12 classes. ASR: n_per_class
// utterances of 3-8 phoneme segments. Pure function of its arguments.
Dataset synth_toy_dataset(Task task, int n_per_class, std::uint64_t seed);

// Regenerates a clip from a "synth:" recipe string as written in toy
// manifests.
WaveformClip synth_from_recipe(std::string_view recipe);

// Frequencies (Hz) of the tone chord assigned to a KWS word class or an ASR
// phoneme under the given dataset seed.
std::vector<double> kws_word_chord(std::uint64_t seed, int word_class);
std::vector<double> asr_phoneme_chord(std::uint64_t seed, int symbol);

// --- manifests ---------------------------------------------------------

// CSV: first line "# classes: a,b,c", then one "source,label" row per clip.
// ASR labels are space separated integer sequences. An optional
// "# task: kws|asr" line may follow the class line.
std::string format_manifest(const DatasetManifest& manifest);
DatasetManifest parse_manifest(std::string_view text);
DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

// Loads every entry: synth recipes are regenerated, files are parsed and
// resampled, and KWS clips are fixed to one second.
std::vector<WaveformClip> load_clips(const DatasetManifest& manifest,
                                     const std::filesystem::path& base_dir);

}  // namespace tfront
