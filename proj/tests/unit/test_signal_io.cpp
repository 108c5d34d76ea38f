// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cstring>

#include "support.hpp"
#include "tfront/signal_io.hpp"

using namespace tfront;
using testing::make_wav;
using testing::WavSpec;

namespace {

std::vector<std::uint8_t> pcm16(const std::vector<std::int16_t>& v) {
  std::vector<std::uint8_t> out;
  for (auto s : v) testing::put16(out, static_cast<std::uint16_t>(s));
  return out;
}

void check_clip_invariants(const WaveformClip& c) {
  REQUIRE(c.sample_rate_hz == 16000);
  for (double v : c.samples) REQUIRE((v >= -1.0 && v <= 1.0));
}

}  // namespace

TEST_CASE("pcm16 mono samples scale by 32768") {
  const auto clip = parse_wav(make_wav({}, pcm16({0, 16384, -32768})));
  REQUIRE(clip.samples.size() == 3);
  CHECK(clip.samples[0] == 0.0);
  CHECK(clip.samples[1] == 0.5);
  CHECK(clip.samples[2] == -1.0);
  CHECK(clip.sample_rate_hz == 16000);
}

TEST_CASE("stereo frames average to mono") {
  WavSpec s;
  s.format = 3;
  s.channels = 2;
  s.bits = 32;
  s.rate = 22050;
  std::vector<std::uint8_t> payload;
  testing::put32(payload, std::bit_cast<std::uint32_t>(1.0f));
  testing::put32(payload, std::bit_cast<std::uint32_t>(0.0f));
  const auto clip = parse_wav(make_wav(s, payload));
  REQUIRE(clip.samples.size() == 1);
  CHECK(clip.samples[0] == 0.5);
  CHECK(clip.sample_rate_hz == 22050);
}

TEST_CASE("8 and 24 bit integer payloads") {
  WavSpec s8;
  s8.bits = 8;
  const auto a = parse_wav(make_wav(s8, {128, 255, 0}));
  CHECK(a.samples == std::vector<double>{0.0, 127.0 / 128.0, -1.0});

  WavSpec s24;
  s24.bits = 24;
  const auto b = parse_wav(make_wav(s24, {0x00, 0x00, 0x40, 0x00, 0x00, 0x80}));
  CHECK(b.samples == std::vector<double>{0.5, -1.0});

  WavSpec s32;
  s32.bits = 32;
  std::vector<std::uint8_t> p;
  testing::put32(p, 0xC0000000u);
  CHECK(parse_wav(make_wav(s32, p)).samples == std::vector<double>{-0.5});
}

TEST_CASE("chunk size past end of file is a format error") {
  auto bytes = make_wav({}, pcm16({1, 2, 3, 4}));
  bytes.resize(bytes.size() - 4);
  CHECK_THROWS_AS(parse_wav(bytes), FormatError);
}

TEST_CASE("malformed containers") {
  std::vector<std::uint8_t> junk = {'R', 'I', 'F', 'X', 0, 0, 0, 0, 'W', 'A', 'V', 'E'};
  CHECK_THROWS_AS(parse_wav(junk), FormatError);
  CHECK_THROWS_AS(parse_wav(std::vector<std::uint8_t>{'R', 'I'}), FormatError);
  // fmt chunk only
  auto bytes = make_wav({}, {});
  bytes.resize(bytes.size() - 8);
  CHECK_THROWS_AS(parse_wav(bytes), FormatError);
}

TEST_CASE("unsupported codecs") {
  WavSpec adpcm;
  adpcm.format = 2;
  adpcm.bits = 4;
  CHECK_THROWS_AS(parse_wav(make_wav(adpcm, {0, 0})), UnsupportedEncodingError);
  WavSpec f64;
  f64.format = 3;
  f64.bits = 64;
  CHECK_THROWS_AS(parse_wav(make_wav(f64, std::vector<std::uint8_t>(8, 0))), UnsupportedEncodingError);
  WavSpec pcm12;
  pcm12.bits = 12;
  CHECK_THROWS_AS(parse_wav(make_wav(pcm12, {0, 0})), UnsupportedEncodingError);
}

TEST_CASE("unknown chunks are skipped") {
  auto bytes = make_wav({}, pcm16({100}));
  // Splice a LIST chunk between fmt and data.
  std::vector<std::uint8_t> list = {'L', 'I', 'S', 'T', 2, 0, 0, 0, 'a', 'b'};
  bytes.insert(bytes.begin() + 36, list.begin(), list.end());
  const auto clip = parse_wav(bytes);
  REQUIRE(clip.samples.size() == 1);
  CHECK(clip.samples[0] == 100.0 / 32768.0);
}

TEST_CASE("pcm16 writer round-trips through the parser") {
  const auto x = testing::random_signal(500, 3, 0.9);
  const auto clip = parse_wav(encode_wav_pcm16(x, 16000));
  REQUIRE(clip.samples.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(clip.samples[i] - x[i]) <= 0.5 / 32768.0 + 1e-15);
}

TEST_CASE("resample is the identity at 16 kHz") {
  WaveformClip c;
  c.samples = testing::random_signal(16000, 1);
  const auto out = resample_to_16k(c);
  CHECK(out.samples == c.samples);
  CHECK(out.sample_rate_hz == 16000);
}

TEST_CASE("parse then resample is idempotent at 16 kHz") {
  const auto wav = encode_wav_pcm16(testing::random_signal(800, 9, 0.5), 16000);
  const auto once = resample_to_16k(parse_wav(wav));
  const auto twice = resample_to_16k(once);
  CHECK(once.samples == twice.samples);
}

TEST_CASE("resample lengths follow the rate ratio") {
  for (int rate : {8000, 11025, 22050, 32000, 44100, 48000}) {
    WaveformClip c;
    c.sample_rate_hz = rate;
    c.samples.assign(static_cast<std::size_t>(rate), 0.1);
    const auto out = resample_to_16k(c);
    CHECK(out.samples.size() == 16000);
    check_clip_invariants(out);
  }
  WaveformClip c;
  c.sample_rate_hz = 44100;
  c.samples.assign(1001, 0.0);
  CHECK(resample_to_16k(c).samples.size() == 1001u * 16000 / 44100);
  c.sample_rate_hz = 0;
  CHECK_THROWS_AS(resample_to_16k(c), ArgumentError);
}

TEST_CASE("downsampled 1 kHz sine keeps its spectral peak") {
  WaveformClip c;
  c.sample_rate_hz = 32000;
  c.samples.resize(32000);
  for (std::size_t n = 0; n < c.samples.size(); ++n) {
    c.samples[n] = 0.8 * std::sin(2.0 * std::numbers::pi * 1000.0 * static_cast<double>(n) / 32000.0);
  }
  const auto out = resample_to_16k(c);
  REQUIRE(out.samples.size() == 16000);
  // 1600-point DFT of an interior stretch: 10 Hz per bin.
  std::vector<std::complex<double>> seg(1600);
  for (std::size_t i = 0; i < seg.size(); ++i) seg[i] = out.samples[4000 + i];
  const auto mag = testing::naive_dft_magnitude(seg);
  const auto peak = std::max_element(mag.begin(), mag.end()) - mag.begin();
  CHECK(std::abs(static_cast<double>(peak) * 10.0 - 1000.0) <= 10.0);
}

TEST_CASE("aliasing component above the new Nyquist is suppressed") {
  WaveformClip c;
  c.sample_rate_hz = 48000;
  c.samples.resize(48000);
  for (std::size_t n = 0; n < c.samples.size(); ++n) {
    c.samples[n] = 0.5 * std::sin(2.0 * std::numbers::pi * 12000.0 * static_cast<double>(n) / 48000.0);
  }
  const auto out = resample_to_16k(c);
  double power = 0.0;
  for (std::size_t i = 1000; i < 15000; ++i) power += out.samples[i] * out.samples[i];
  CHECK(power / 14000.0 < 1e-4 * 0.125);
}

TEST_CASE("fix_length pads and truncates") {
  CHECK(fix_length({1.0, 2.0}, 4) == std::vector<double>{1.0, 2.0, 0.0, 0.0});
  CHECK(fix_length({1.0, 2.0, 3.0}, 2) == std::vector<double>{1.0, 2.0});
}

TEST_CASE("toy kws generation is deterministic") {
  const auto a = synth_toy_dataset(Task::Kws, 1, 0);
  const auto b = synth_toy_dataset(Task::Kws, 1, 0);
  REQUIRE(a.clips.size() == b.clips.size());
  for (std::size_t i = 0; i < a.clips.size(); ++i) {
    REQUIRE(a.clips[i].samples.size() == b.clips[i].samples.size());
    CHECK(std::memcmp(a.clips[i].samples.data(), b.clips[i].samples.data(),
                      a.clips[i].samples.size() * sizeof(double)) == 0);
  }
  const auto c = synth_toy_dataset(Task::Kws, 1, 1);
  CHECK(c.clips[0].samples != a.clips[0].samples);
}

TEST_CASE("toy kws layout") {
  const auto d = synth_toy_dataset(Task::Kws, 5, 0);
  CHECK(d.manifest.num_classes() == 12);
  CHECK(d.manifest.task == Task::Kws);
  REQUIRE(d.clips.size() == 60);
  std::vector<int> counts(12, 0);
  for (std::size_t i = 0; i < d.clips.size(); ++i) {
    CHECK(d.clips[i].samples.size() == 16000);
    CHECK(d.clips[i].label == d.manifest.entries[i].label);
    check_clip_invariants(d.clips[i]);
    ++counts[static_cast<std::size_t>(d.clips[i].label.class_index)];
  }
  for (int n : counts) CHECK(n == 5);
  CHECK(d.manifest.class_names[kKwsUnknown] == "unknown");
  CHECK(d.manifest.class_names[kKwsSilence] == "silence");
}

TEST_CASE("toy asr layout") {
  const auto d = synth_toy_dataset(Task::Asr, 3, 1);
  CHECK(d.manifest.num_classes() == 62);
  REQUIRE(d.clips.size() == 3);
  for (const auto& c : d.clips) {
    CHECK(c.label.symbols.size() >= 3);
    CHECK(c.label.symbols.size() <= 8);
    for (int s : c.label.symbols) CHECK((s >= 0 && s < 61));
    // 80-200 ms per segment
    const double seconds = static_cast<double>(c.samples.size()) / 16000.0;
    CHECK(seconds >= 0.08 * static_cast<double>(c.label.symbols.size()) - 1e-3);
    CHECK(seconds <= 0.2 * static_cast<double>(c.label.symbols.size()) + 1e-3);
    check_clip_invariants(c);
  }
  for (const auto& c : synth_toy_dataset(Task::Asr, 40, 4).clips) check_clip_invariants(c);
}

TEST_CASE("toy chords are class-unique and in band") {
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    std::vector<std::vector<double>> words;
    for (int c = 0; c < kKwsUnknown; ++c) {
      auto chord = kws_word_chord(seed, c);
      CHECK((chord.size() >= 2 && chord.size() <= 3));
      for (double f : chord) CHECK((f >= 200.0 && f <= 6000.0));
      words.push_back(chord);
    }
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (std::size_t j = i + 1; j < words.size(); ++j) CHECK(words[i] != words[j]);
    }
    std::vector<double> all;
    for (int s = 0; s < kPhonemes; ++s) {
      const auto chord = asr_phoneme_chord(seed, s);
      CHECK((chord.size() >= 2 && chord.size() <= 3));
      all.insert(all.end(), chord.begin(), chord.end());
    }
    std::sort(all.begin(), all.end());
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  }
  CHECK_THROWS_AS(kws_word_chord(0, 10), ArgumentError);
  CHECK_THROWS_AS(asr_phoneme_chord(0, 61), ArgumentError);
  CHECK_THROWS_AS(synth_toy_dataset(Task::Kws, 0, 0), ArgumentError);
}

TEST_CASE("recipes regenerate their clips") {
  const auto d = synth_toy_dataset(Task::Kws, 2, 5);
  for (std::size_t i = 0; i < d.clips.size(); i += 5) {
    CHECK(synth_from_recipe(d.manifest.entries[i].source).samples == d.clips[i].samples);
  }
  const auto a = synth_toy_dataset(Task::Asr, 2, 5);
  const auto re = synth_from_recipe(a.manifest.entries[1].source);
  CHECK(re.samples == a.clips[1].samples);
  CHECK(re.label == a.clips[1].label);
  CHECK_THROWS_AS(synth_from_recipe("synth:kws:seed=0:index=1"), FormatError);
}

TEST_CASE("manifest text round-trip") {
  const auto d = synth_toy_dataset(Task::Asr, 4, 2);
  const auto text = format_manifest(d.manifest);
  CHECK(text.rfind("# classes: ", 0) == 0);
  const auto back = parse_manifest(text);
  CHECK(back.task == Task::Asr);
  CHECK(back.class_names == d.manifest.class_names);
  REQUIRE(back.entries.size() == d.manifest.entries.size());
  for (std::size_t i = 0; i < back.entries.size(); ++i) {
    CHECK(back.entries[i].source == d.manifest.entries[i].source);
    CHECK(back.entries[i].label == d.manifest.entries[i].label);
  }
}

TEST_CASE("manifest validation") {
  CHECK_THROWS_AS(parse_manifest("a.wav,0\n"), FormatError);
  CHECK_THROWS_AS(parse_manifest("# classes: x,y\na.wav,2\n"), FormatError);
  CHECK_THROWS_AS(parse_manifest("# classes: x,y\na.wav\n"), FormatError);
  CHECK_THROWS_AS(parse_manifest("# classes: x,y\na.wav,zz\n"), FormatError);
  const auto m = parse_manifest("# classes: x,y\n# task: kws\na.wav,1\n\n");
  REQUIRE(m.entries.size() == 1);
  CHECK(m.entries[0].label.class_index == 1);
}

TEST_CASE("load_clips reads, resamples and fixes kws length") {
  const auto dir = testing::temp_dir("load");
  WaveformClip src;
  src.sample_rate_hz = 8000;
  src.samples = testing::random_signal(4000, 2, 0.5);
  {
    const auto bytes = encode_wav_pcm16(src.samples, 8000);
    std::ofstream(dir / "short.wav", std::ios::binary)
        .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  DatasetManifest m;
  m.task = Task::Kws;
  m.class_names = kws_class_names();
  m.entries.push_back({"short.wav", {3, {}}});
  m.entries.push_back({"synth:kws:seed=0:class=2:index=0", {2, {}}});
  write_manifest(m, dir / "m.csv");
  const auto back = read_manifest(dir / "m.csv");
  const auto clips = load_clips(back, dir);
  REQUIRE(clips.size() == 2);
  CHECK(clips[0].samples.size() == 16000);
  CHECK(clips[0].label.class_index == 3);
  // 0.25 s of audio at 8 kHz -> 8000 resampled samples, zero padded after.
  CHECK(std::all_of(clips[0].samples.begin() + 8000, clips[0].samples.end(), [](double v) { return v == 0.0; }));
  CHECK(clips[1].samples == synth_toy_dataset(Task::Kws, 1, 0).clips[2].samples);
  for (const auto& c : clips) check_clip_invariants(c);
  std::filesystem::remove_all(dir);
}
