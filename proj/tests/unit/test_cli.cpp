// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "support.hpp"
#include "tfront/analysis.hpp"
#include "tfront/bank_io.hpp"
#include "tfront/cli.hpp"
#include "tfront/trainer.hpp"

using namespace tfront;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tfront");
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) v.push_back(l);
  return v;
}

std::filesystem::path golden(const std::string& name) { return std::filesystem::path(TFRONT_GOLDEN_DIR) / name; }

}  // namespace

TEST_CASE("help output matches the golden files") {
  const auto top = cli({"--help"});
  CHECK(top.code == 0);
  CHECK(top.out == testing::read_text(golden("help.txt")));
  for (const std::string sub : {"synth", "train", "eval", "ablate-mask", "ablate-mels", "inspect", "gradcheck"}) {
    CAPTURE(sub);
    const auto r = cli({sub, "--help"});
    CHECK(r.code == 0);
    CHECK(r.out == testing::read_text(golden("help_" + sub + ".txt")));
  }
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  const auto bad = cli({"train", "--bogus"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("Usage:") != std::string::npos);
  CHECK(cli({"train", "--setting", "E"}).code == 2);
  CHECK(cli({"train", "--epochs", "-1"}).code == 2);
  CHECK(cli({"train", "--n-mels", "0"}).code == 2);
  CHECK(cli({"train", "--lr", "0"}).code == 2);
  CHECK(cli({"train", "--epochs", "0", "--mask", "300-310"}).code == 2);
  CHECK(cli({"train", "--epochs", "0", "--mel-init", "random", "--mel-style", "constrained"}).code == 2);
  CHECK(cli({"eval"}).code == 2);
  CHECK(cli({"train", "--config", "/nonexistent/file.cfg"}).code == 2);
}

TEST_CASE("runtime failures exit with status 1") {
  CHECK(cli({"eval", "--bank", "/nonexistent/x.bank"}).code == 1);
  CHECK(cli({"train", "--epochs", "0", "--manifest", "/nonexistent/m.csv"}).code == 1);
}

TEST_CASE("the binary reports exit codes to the shell") {
  const std::string bin = TFRONT_CLI_PATH;
  const auto status = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("--help") == 0);
  CHECK(status("train --bogus") == 2);
  CHECK(status("eval --bank /nonexistent/x.bank") == 1);
}

TEST_CASE("config text parsing") {
  const auto kv = parse_config_text("# header\n\nepochs = 3\n  n-mels=20  # trailing\r\nmask=216-240\n");
  REQUIRE(kv.size() == 3);
  CHECK(kv[0] == std::pair<std::string, std::string>{"epochs", "3"});
  CHECK(kv[1] == std::pair<std::string, std::string>{"n-mels", "20"});
  CHECK(kv[2].second == "216-240");
  CHECK_THROWS_AS(parse_config_text("epochs\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("=3\n"), ConfigError);
}

TEST_CASE("config file values apply unless overridden on the command line") {
  const auto dir = testing::temp_dir("cfg");
  {
    std::ofstream f(dir / "run.cfg");
    f << "epochs=0\nn_mels=12\nsetting=B\nsynth=2\n";
  }
  const auto r = cli({"train", "--config", (dir / "run.cfg").string(), "--n-mels", "7"});
  CHECK(r.code == 0);
  const auto first = lines(r.out).at(0);
  CHECK(first.rfind("# config: command=train", 0) == 0);
  CHECK(first.find(" n-mels=7") != std::string::npos);
  CHECK(first.find(" setting=B") != std::string::npos);
  CHECK(first.find(" epochs=0") != std::string::npos);
  CHECK(lines(r.out).at(1) == "epoch,train_loss,metric,wall_seconds");
  std::filesystem::remove_all(dir);
}

TEST_CASE("train writes csv, checkpoints and a bank that inspect exports") {
  const auto dir = testing::temp_dir("train");
  const std::string bank = (dir / "final.bank").string();
  const auto r = cli({"train", "--synth", "2", "--n-mels", "8", "--epochs", "2", "--batch-size", "6", "--setting",
                      "B", "--seed", "5", "--ckpt-dir", (dir / "ckpt").string(), "--out", (dir / "run.csv").string(),
                      "--save", bank});
  REQUIRE(r.code == 0);
  const auto out = lines(r.out);
  REQUIRE(out.size() == 4);
  CHECK(out[2].rfind("1,", 0) == 0);
  CHECK(std::count(out[3].begin(), out[3].end(), ',') == 3);
  const auto csv = lines(testing::read_text(dir / "run.csv"));
  REQUIRE(csv.size() == 3);
  CHECK(csv[0] == "epoch,train_loss,metric");
  // The file rows are the stdout rows minus the wall time column.
  CHECK(out[2].rfind(csv[1] + ",", 0) == 0);
  CHECK(std::filesystem::exists(dir / "ckpt" / "epoch_002.bank"));
  CHECK(testing::read_text(dir / "ckpt" / "epoch_002.bank") == testing::read_text(bank));

  const auto ins = cli({"inspect", "--bank", bank, "--out-dir", (dir / "inspect").string(), "--bins", "25,100"});
  REQUIRE(ins.code == 0);
  CHECK(lines(ins.out).size() == 1 + 1 + 3 + 4);
  for (const char* f : {"mel_weights.csv", "mel_importance.csv", "stft_importance.csv", "stft_kernel_25.csv",
                        "kernel_dft_100.csv"}) {
    CHECK(std::filesystem::exists(dir / "inspect" / f));
  }
  CHECK(cli({"inspect", "--bank", bank, "--out-dir", (dir / "inspect").string(), "--bins", "241"}).code == 2);

  const auto ev = cli({"eval", "--bank", bank, "--synth", "2", "--split", "all"});
  REQUIRE(ev.code == 0);
  const auto ev_lines = lines(ev.out);
  REQUIRE(ev_lines.size() == 3);
  CHECK(ev_lines[1] == "task,split,clips,metric");
  CHECK(ev_lines[2].rfind("kws,all,24,", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("zero epochs then inspect exports the initial bank") {
  const auto dir = testing::temp_dir("init");
  const std::string bank = (dir / "init.bank").string();
  REQUIRE(cli({"train", "--synth", "2", "--n-mels", "10", "--epochs", "0", "--seed", "9", "--save", bank}).code == 0);
  REQUIRE(cli({"inspect", "--bank", bank, "--out-dir", dir.string()}).code == 0);
  TrainConfig c;
  c.n_mels = 10;
  c.seed = 9;
  const auto init = init_model(c);
  CHECK(read_bank_file(dir / "mel_weights.csv")[0].values == init.mel.weights);
  const auto imp = read_bank_file(dir / "mel_importance.csv")[0].values;
  const auto ref = cumulative_importance(init.mel);
  for (std::size_t k = 0; k < ref.size(); ++k) CHECK(imp(static_cast<Eigen::Index>(k), 0) == ref[k]);
  std::filesystem::remove_all(dir);
}

TEST_CASE("ablate-mask prints one row per setting and mask") {
  const auto r = cli({"ablate-mask", "--synth", "2", "--n-mels", "6", "--epochs", "1", "--masks", "216-240,25-49+216-240,none",
                      "--settings", "A,B"});
  REQUIRE(r.code == 0);
  const auto out = lines(r.out);
  REQUIRE(out.size() == 2 + 6);
  CHECK(out[1] == "setting,trainable_mel,mask,metric");
  CHECK(out[2].rfind("A,no,216-240,", 0) == 0);
  CHECK(out[3].rfind("A,no,25-49+216-240,", 0) == 0);
  CHECK(out[7].rfind("B,yes,none,", 0) == 0);
}

TEST_CASE("ablate-mask default grid has five rows") {
  const auto r = cli({"ablate-mask", "--task", "kws", "--masks", "25-49,25-74,216-240,191-240,none", "--synth", "2",
                      "--n-mels", "6", "--epochs", "1"});
  REQUIRE(r.code == 0);
  const auto out = lines(r.out);
  REQUIRE(out.size() == 2 + 5);
  CHECK(out[2].rfind("B,yes,25-49,", 0) == 0);
  CHECK(out[5].rfind("B,yes,191-240,", 0) == 0);
  CHECK(out[6].rfind("B,yes,none,", 0) == 0);
}

TEST_CASE("ablate-mels prints one row per count and setting") {
  const auto r = cli({"ablate-mels", "--synth", "2", "--epochs", "1", "--n-mels-list", "4,6", "--settings", "A,D"});
  REQUIRE(r.code == 0);
  const auto out = lines(r.out);
  REQUIRE(out.size() == 2 + 4);
  CHECK(out[1] == "n_mels,setting,metric");
  CHECK(out[2].rfind("4,A,", 0) == 0);
  CHECK(out[5].rfind("6,D,", 0) == 0);
  CHECK(cli({"ablate-mels", "--n-mels-list", "x"}).code == 2);
}

TEST_CASE("synth writes a manifest that train can read, with or without wav files") {
  const auto dir = testing::temp_dir("synth");
  const auto r = cli({"synth", "--task", "asr", "--n-per-class", "6", "--seed", "2", "--out", (dir / "m.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(read_manifest(dir / "m.csv").entries.size() == 6);

  const auto w = cli({"synth", "--n-per-class", "5", "--out", (dir / "k.csv").string(), "--wav-dir", (dir / "wav").string()});
  REQUIRE(w.code == 0);
  const auto m = read_manifest(dir / "k.csv");
  REQUIRE(m.entries.size() == 60);
  CHECK(std::filesystem::exists(dir / m.entries[0].source));
  const auto clip = read_wav(dir / m.entries[0].source);
  CHECK(clip.samples.size() == 16000);

  const auto t = cli({"train", "--manifest", (dir / "k.csv").string(), "--n-mels", "6", "--epochs", "1"});
  CHECK(t.code == 0);
  CHECK(cli({"train", "--task", "asr", "--manifest", (dir / "k.csv").string(), "--epochs", "0"}).code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("gradcheck passes with default settings") {
  const auto r = cli({"gradcheck", "--seed", "3"});
  CHECK(r.code == 0);
  const auto out = lines(r.out);
  REQUIRE(out.size() > 2);
  CHECK(out[1] == "suite,checked,max_rel_error,status");
  for (std::size_t i = 2; i < out.size(); ++i) CHECK(out[i].ends_with(",pass"));
}
