// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

// Deterministic toy stand-ins for the keyword-spotting and phoneme datasets.
// Every clip is a pure function of (task, dataset seed, class, index), so a
// manifest row like "synth:kws:seed=0:class=3:index=7" fully describes it.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "tfront/common.hpp"
#include "tfront/rng.hpp"
#include "tfront/signal_io.hpp"

namespace tfront {
namespace {

constexpr double kMinToneHz = 200.0;
constexpr double kMaxToneHz = 6000.0;
constexpr double kSnrDb = 10.0;
constexpr double kToneAmplitude = 0.25;
// Minimum spacing between "unknown" tones. The phoneme inventory has ~150
// tones to place, so it is packed tighter.
constexpr double kToneSpacingHz = 45.0;
constexpr double kPhonemeSpacingHz = 20.0;
constexpr double kAnchorMaxHz = 3000.0;
constexpr double kAnchorSpacingHz = 150.0;
constexpr double kCenterSpacingHz = 300.0;
// Two STFT bins: the split tones sit on each other's Hann nulls.
constexpr double kSplitHz = 2.0 * kSampleRate / kNfft;
constexpr int kMaxDraws = 1000000;
// Per-clip detuning of each tone, as a fraction of its frequency.
constexpr double kDetune = 0.004;
// Phoneme segments are struck rather than held: short attack, then this
// exponential decay time constant.
constexpr double kPhonemeDecay = 0.04;

constexpr std::uint64_t kChordStream = 0xC0DE;
constexpr std::uint64_t kClipStream = 0xC11B;

bool far_from(double f, const std::vector<double>& taken, double spacing) {
  return std::all_of(taken.begin(), taken.end(),
                     [&](double t) { return std::abs(t - f) >= spacing; });
}

// Draws `count` chords of 2-3 tones each, all tones pairwise separated.
std::vector<std::vector<double>> draw_inventory(std::uint64_t seed, std::uint64_t salt, int count,
                                                double spacing) {
  Rng rng(mix_seed(seed, kChordStream, salt));
  int draws = 0;
  std::vector<double> taken;
  std::vector<std::vector<double>> chords(static_cast<std::size_t>(count));
  for (auto& chord : chords) {
    const int tones = 2 + static_cast<int>(rng.below(2));
    while (static_cast<int>(chord.size()) < tones) {
      if (++draws > kMaxDraws) throw ArgumentError("synth: tone inventory does not fit the band");
      const double f = rng.uniform(kMinToneHz, kMaxToneHz);
      if (!far_from(f, taken, spacing)) continue;
      taken.push_back(f);
      chord.push_back(f);
    }
    std::sort(chord.begin(), chord.end());
  }
  return chords;
}

double draw_spaced(Rng& rng, double lo, double hi, std::vector<double>& taken, double spacing) {
  for (int draws = 0; draws < kMaxDraws; ++draws) {
    const double f = rng.uniform(lo, hi);
    if (far_from(f, taken, spacing)) {
      taken.push_back(f);
      return f;
    }
  }
  throw ArgumentError("synth: tone inventory does not fit the band");
}

// The ten words come in five pairs. Both words of a pair share a low anchor
// tone; one adds a split pair of high tones at c -/+ kSplitHz, the other a
// single tone at c. A coarse triangular filter that is linear across the
// split cannot tell the two apart.
struct WordFamily {
  double anchor_hz;
  double center_hz;
};

std::vector<WordFamily> draw_word_families(std::uint64_t seed) {
  Rng rng(mix_seed(seed, kChordStream, 1));
  std::vector<double> anchors, centers;
  std::vector<WordFamily> families;
  for (int k = 0; k < kKwsUnknown / 2; ++k) {
    const double a = draw_spaced(rng, kMinToneHz, kAnchorMaxHz, anchors, kAnchorSpacingHz);
    const double c = draw_spaced(rng, kAnchorMaxHz + kSplitHz, kMaxToneHz - kSplitHz, centers, kCenterSpacingHz);
    families.push_back({a, c});
  }
  return families;
}

// Level of each tone as (amplitude draw slot, gain). The split tones share
// one draw and the merged tone carries twice that draw.
struct ToneLevel {
  int slot;
  double gain;
};

std::vector<ToneLevel> kws_word_levels(int word_class) {
  if (word_class % 2 == 0) return {{0, 1.0}, {1, 1.0}, {1, 1.0}};
  return {{0, 1.0}, {1, 2.0}};
}

// Raised-cosine gated envelope.
double envelope(double t, double start, double duration, double ramp) {
  if (t < start || t >= start + duration) return 0.0;
  const double rel = t - start;
  const double tail = start + duration - t;
  const double edge = std::min(rel, tail);
  if (edge >= ramp) return 1.0;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * edge / ramp));
}

void add_chord(std::vector<double>& out, const std::vector<double>& chord, double start_s,
               double duration_s, double ramp_s, Rng& rng, std::vector<ToneLevel> levels = {},
               double decay_s = 0.0) {
  if (levels.empty()) {
    for (std::size_t k = 0; k < chord.size(); ++k) levels.push_back({static_cast<int>(k), 1.0});
  }
  std::vector<double> slot_amp(chord.size());
  for (double& a : slot_amp) a = kToneAmplitude * rng.uniform(0.4, 1.0);
  for (std::size_t k = 0; k < chord.size(); ++k) {
    const double f = chord[k] * (1.0 + rng.uniform(-kDetune, kDetune));
    const double amp = levels[k].gain * slot_amp[static_cast<std::size_t>(levels[k].slot)];
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const auto first = static_cast<std::size_t>(std::max(0.0, std::floor(start_s * kSampleRate)));
    const auto last = std::min(out.size(), static_cast<std::size_t>(
                                               std::ceil((start_s + duration_s) * kSampleRate)));
    for (std::size_t n = first; n < last; ++n) {
      const double t = static_cast<double>(n) / kSampleRate;
      const double fade = decay_s > 0.0 ? std::exp(-(t - start_s) / decay_s) : 1.0;
      out[n] += amp * fade * envelope(t, start_s, duration_s, ramp_s) *
                std::sin(2.0 * std::numbers::pi * f * t + phase);
    }
  }
}

double mean_power(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

void add_noise(std::vector<double>& x, double sigma, Rng& rng) {
  for (double& v : x) v += sigma * rng.normal();
}

void normalize_peak(std::vector<double>& x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 1.0) {
    for (double& v : x) v /= peak;
  }
}

void add_noise_at_snr(std::vector<double>& x, Rng& rng) {
  const double power = mean_power(x);
  add_noise(x, std::sqrt(power / std::pow(10.0, kSnrDb / 10.0)), rng);
}

std::vector<double> kws_unknown_chord(std::uint64_t seed, Rng& rng) {
  std::vector<double> reserved;
  for (int c = 0; c < kKwsUnknown; ++c) {
    const auto chord = kws_word_chord(seed, c);
    reserved.insert(reserved.end(), chord.begin(), chord.end());
  }
  const int tones = 2 + static_cast<int>(rng.below(2));
  std::vector<double> chord;
  while (static_cast<int>(chord.size()) < tones) {
    const double f = rng.uniform(kMinToneHz, kMaxToneHz);
    if (far_from(f, reserved, 2.0 * kToneSpacingHz) && far_from(f, chord, kToneSpacingHz)) {
      chord.push_back(f);
    }
  }
  std::sort(chord.begin(), chord.end());
  return chord;
}

WaveformClip synth_kws_clip(std::uint64_t seed, int cls, int index) {
  Rng rng(mix_seed(seed, kClipStream, (static_cast<std::uint64_t>(cls) << 32) |
                                          static_cast<std::uint32_t>(index)));
  WaveformClip clip;
  clip.label.class_index = cls;
  clip.samples.assign(kKwsClipSamples, 0.0);
  if (cls == kKwsSilence) {
    add_noise(clip.samples, kToneAmplitude * rng.uniform(0.1, 0.3), rng);
  } else {
    const bool word = cls != kKwsUnknown;
    const auto chord = word ? kws_word_chord(seed, cls) : kws_unknown_chord(seed, rng);
    const double start = rng.uniform(0.05, 0.3);
    const double duration = rng.uniform(0.45, 0.65);
    add_chord(clip.samples, chord, start, duration, 0.03, rng, word ? kws_word_levels(cls) : std::vector<ToneLevel>{});
    add_noise_at_snr(clip.samples, rng);
  }
  normalize_peak(clip.samples);
  return clip;
}

WaveformClip synth_asr_clip(std::uint64_t seed, int index) {
  Rng rng(mix_seed(seed, kClipStream ^ 0xA5A5, static_cast<std::uint64_t>(index)));
  const int segments = 3 + static_cast<int>(rng.below(6));
  std::vector<int> symbols;
  std::vector<double> durations;
  double total = 0.0;
  for (int s = 0; s < segments; ++s) {
    int sym = static_cast<int>(rng.below(kPhonemes));
    // Immediate repeats would need an explicit gap to be recoverable.
    while (!symbols.empty() && sym == symbols.back()) sym = static_cast<int>(rng.below(kPhonemes));
    symbols.push_back(sym);
    durations.push_back(rng.uniform(0.08, 0.2));
    total += durations.back();
  }
  WaveformClip clip;
  clip.label.symbols = symbols;
  clip.samples.assign(static_cast<std::size_t>(std::ceil(total * kSampleRate)), 0.0);
  double start = 0.0;
  for (int s = 0; s < segments; ++s) {
    add_chord(clip.samples, asr_phoneme_chord(seed, symbols[static_cast<std::size_t>(s)]), start,
              durations[static_cast<std::size_t>(s)], 0.005, rng, {}, kPhonemeDecay);
    start += durations[static_cast<std::size_t>(s)];
  }
  add_noise_at_snr(clip.samples, rng);
  normalize_peak(clip.samples);
  return clip;
}

std::string kws_recipe(std::uint64_t seed, int cls, int index) {
  return "synth:kws:seed=" + std::to_string(seed) + ":class=" + std::to_string(cls) +
         ":index=" + std::to_string(index);
}

std::string asr_recipe(std::uint64_t seed, int index) {
  return "synth:asr:seed=" + std::to_string(seed) + ":index=" + std::to_string(index);
}

std::uint64_t recipe_field(std::string_view recipe, std::string_view key) {
  const std::string needle = ":" + std::string(key) + "=";
  const auto pos = recipe.find(needle);
  if (pos == std::string_view::npos) throw FormatError("recipe: missing '" + std::string(key) + "'");
  const char* first = recipe.data() + pos + needle.size();
  const char* end = recipe.data() + recipe.size();
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(first, end, value);
  if (ec != std::errc() || (ptr != end && *ptr != ':')) {
    throw FormatError("recipe: bad value for '" + std::string(key) + "'");
  }
  return value;
}

}  // namespace

std::vector<double> kws_word_chord(std::uint64_t seed, int word_class) {
  if (word_class < 0 || word_class >= kKwsUnknown) throw ArgumentError("kws word class out of range");
  const WordFamily fam = draw_word_families(seed)[static_cast<std::size_t>(word_class / 2)];
  if (word_class % 2 == 0) return {fam.anchor_hz, fam.center_hz - kSplitHz, fam.center_hz + kSplitHz};
  return {fam.anchor_hz, fam.center_hz};
}

std::vector<double> asr_phoneme_chord(std::uint64_t seed, int symbol) {
  if (symbol < 0 || symbol >= kPhonemes) throw ArgumentError("phoneme symbol out of range");
  return draw_inventory(seed, 2, kPhonemes, kPhonemeSpacingHz)[static_cast<std::size_t>(symbol)];
}

Dataset synth_toy_dataset(Task task, int n_per_class, std::uint64_t seed) {
  if (n_per_class < 1) throw ArgumentError("synth: n_per_class must be >= 1");
  Dataset out;
  out.manifest.task = task;
  if (task == Task::Kws) {
    out.manifest.class_names = kws_class_names();
    for (int c = 0; c < kKwsClasses; ++c) {
      for (int i = 0; i < n_per_class; ++i) {
        WaveformClip clip = synth_kws_clip(seed, c, i);
        out.manifest.entries.push_back({kws_recipe(seed, c, i), clip.label});
        out.clips.push_back(std::move(clip));
      }
    }
  } else {
    out.manifest.class_names = asr_class_names();
    for (int i = 0; i < n_per_class; ++i) {
      WaveformClip clip = synth_asr_clip(seed, i);
      out.manifest.entries.push_back({asr_recipe(seed, i), clip.label});
      out.clips.push_back(std::move(clip));
    }
  }
  return out;
}

WaveformClip synth_from_recipe(std::string_view recipe) {
  if (recipe.starts_with("synth:kws:")) {
    const auto cls = recipe_field(recipe, "class");
    if (cls >= kKwsClasses) throw FormatError("recipe: class out of range");
    return synth_kws_clip(recipe_field(recipe, "seed"), static_cast<int>(cls),
                          static_cast<int>(recipe_field(recipe, "index")));
  }
  if (recipe.starts_with("synth:asr:")) {
    return synth_asr_clip(recipe_field(recipe, "seed"),
                          static_cast<int>(recipe_field(recipe, "index")));
  }
  throw FormatError("recipe: unknown kind '" + std::string(recipe) + "'");
}

}  // namespace tfront
