// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfront/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tfront/analysis.hpp"
#include "tfront/gradcheck.hpp"
#include "tfront/trainer.hpp"

namespace tfront {
namespace {

// A failure while turning flags into a configuration; reported as usage.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string normalize_key(std::string key) {
  for (char& c : key) {
    if (c == '_' || c == '.') c = '-';
  }
  return key;
}

struct DataFlags {
  std::string task = "kws";
  std::string manifest;
  int synth = 0;
  std::uint64_t data_seed = 0;
};

struct TrainFlags {
  std::string setting = "A";
  std::string mel_style = "freeform";
  std::string mel_init = "triangular";
  int n_mels = 40;
  std::string mask = "none";
  double lr = 1e-3;
  std::optional<double> lr_mel;
  std::optional<double> lr_stft;
  int epochs = 30;
  int batch_size = 20;
  std::uint64_t seed = 0;
  int hidden_size = 256;
  int workers = 0;
};

void add_data_flags(CLI::App* app, DataFlags& d, bool with_task) {
  if (with_task) {
    app->add_option("--task", d.task, "Task: kws (12-way keywords) or asr (61 phonemes, CTC)")
        ->check(CLI::IsMember({"kws", "asr"}));
  }
  app->add_option("--manifest", d.manifest, "Dataset manifest CSV; when absent a toy dataset is synthesized");
  app->add_option("--synth", d.synth, "Toy dataset size: clips per class (kws) or utterances (asr); 0 = 50 / 100")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--data-seed", d.data_seed, "Seed of the synthesized toy dataset");
}

void add_model_flags(CLI::App* app, TrainFlags& t, bool with_setting, bool with_mask, bool with_n_mels) {
  if (with_setting) {
    app->add_option("--setting", t.setting, "Trainable stages: A none, B Mel, C STFT, D both")
        ->check(CLI::IsMember({"A", "B", "C", "D"}));
  }
  app->add_option("--mel-style", t.mel_style, "Mel bank: freeform (free weights in [0,1]) or constrained (triangles)")
      ->check(CLI::IsMember({"freeform", "constrained"}));
  app->add_option("--mel-init", t.mel_init, "FreeForm initialization: triangular or random (uniform [0,1])")
      ->check(CLI::IsMember({"triangular", "random"}));
  if (with_n_mels) app->add_option("--n-mels", t.n_mels, "Number of Mel filters")->check(CLI::PositiveNumber);
  if (with_mask) app->add_option("--mask", t.mask, "STFT bins zeroed before the Mel stage, e.g. 216-240 or 25-49,216-240");
  app->add_option("--lr", t.lr, "Adam learning rate")->check(CLI::PositiveNumber);
  app->add_option("--lr-mel", t.lr_mel, "Learning rate of the Mel stage (default: --lr)")->check(CLI::PositiveNumber);
  app->add_option("--lr-stft", t.lr_stft, "Learning rate of the STFT stage (default: --lr)")->check(CLI::PositiveNumber);
  app->add_option("--epochs", t.epochs, "Training epochs")->check(CLI::NonNegativeNumber);
  app->add_option("--batch-size", t.batch_size, "Examples per optimizer step")->check(CLI::PositiveNumber);
  app->add_option("--hidden-size", t.hidden_size, "LSTM width (asr)")->check(CLI::PositiveNumber);
  app->add_option("--seed", t.seed, "Seed for initialization and sampling");
  app->add_option("--workers", t.workers, "Parallel lanes per batch; 0 = one per hardware thread")
      ->check(CLI::NonNegativeNumber);
}

void add_config_flag(CLI::App* app, std::string& sink) {
  // Consumed before parsing; registered so it shows up in --help.
  app->add_option("--config", sink, "Flat key=value file of flag defaults (flags on the command line win)")
      ->type_name("FILE");
}

TrainConfig to_train_config(const DataFlags& d, const TrainFlags& t) {
  TrainConfig c;
  c.task = parse_task(d.task);
  c.setting = parse_setting(t.setting);
  c.mel_style = parse_mel_style(t.mel_style);
  c.mel_init = t.mel_init == "random" ? MelInit::Random : MelInit::Triangular;
  c.n_mels = t.n_mels;
  std::string mask = t.mask;
  std::replace(mask.begin(), mask.end(), '+', ',');
  c.mask = parse_mask(mask);
  c.lr = t.lr;
  c.lr_mel = t.lr_mel;
  c.lr_stft = t.lr_stft;
  c.epochs = t.epochs;
  c.batch_size = t.batch_size;
  c.seed = t.seed;
  c.hidden_size = t.hidden_size;
  c.workers = t.workers;
  validate_config(c);
  return c;
}

Dataset load_dataset(const DataFlags& d, Task task) {
  if (!d.manifest.empty()) {
    Dataset data;
    data.manifest = read_manifest(d.manifest);
    if (data.manifest.task != task) {
      throw ConfigError("manifest task is " + std::string(task_name(data.manifest.task)) + ", expected " +
                        std::string(task_name(task)));
    }
    data.clips = load_clips(data.manifest, std::filesystem::path(d.manifest).parent_path());
    return data;
  }
  const int n = d.synth > 0 ? d.synth : (task == Task::Kws ? 50 : 100);
  return synth_toy_dataset(task, n, d.data_seed);
}

// "# config: command=train task=kws ..." from the final option values.
std::string effective_config(const CLI::App* sub) {
  std::string line = "# config: command=" + sub->get_name();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt == sub->get_help_ptr()) continue;
    const std::string name = opt->get_name(false, true);
    if (name.empty() || name == "--config") continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
    } else {
      value = opt->get_default_str();
    }
    line += " " + name.substr(2) + "=" + value;
  }
  return line;
}

double final_metric(const TrainResult& r) { return r.reports.empty() ? 0.0 : r.reports.back().metric; }

int cmd_synth(const DataFlags& d, const std::string& out_path, const std::string& wav_dir, std::ostream& out) {
  const Task task = parse_task(d.task);
  Dataset data = load_dataset(DataFlags{d.task, "", d.synth, d.data_seed}, task);
  const std::filesystem::path manifest_path(out_path);
  if (!wav_dir.empty()) {
    const std::filesystem::path dir(wav_dir);
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::absolute(manifest_path).parent_path();
    for (std::size_t i = 0; i < data.clips.size(); ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "%s_%05zu.wav", std::string(task_name(task)).c_str(), i);
      const auto file = dir / name;
      const auto bytes = encode_wav_pcm16(data.clips[i].samples, kSampleRate);
      std::ofstream f(file, std::ios::binary);
      f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
      if (!f) throw Error("cannot write " + file.string());
      data.manifest.entries[i].source = std::filesystem::relative(std::filesystem::absolute(file), base).string();
    }
  }
  write_manifest(data.manifest, manifest_path);
  out << "task,clips,classes,manifest\n"
      << task_name(task) << "," << data.clips.size() << "," << data.manifest.num_classes() << "," << out_path << "\n";
  return kExitOk;
}

int cmd_train(const DataFlags& d, const TrainFlags& t, const std::string& ckpt_dir, const std::string& csv_path,
              const std::string& save_path, std::ostream& out, std::ostream& err) {
  TrainConfig config = to_train_config(d, t);
  config.ckpt_dir = ckpt_dir;
  const Dataset data = load_dataset(d, config.task);
  std::unique_ptr<std::ofstream> csv;
  if (!csv_path.empty()) {
    csv = std::make_unique<std::ofstream>(csv_path);
    if (!*csv) throw Error("cannot write " + csv_path);
    *csv << format_epoch_csv_header(false) << "\n";
  }
  out << format_epoch_csv_header(true) << "\n";
  const TrainResult result = train(
      config, data,
      [&](const EpochReport& r, const ModelParams&) {
        out << format_epoch_csv_row(r, true) << "\n" << std::flush;
        if (csv) *csv << format_epoch_csv_row(r, false) << "\n" << std::flush;
      },
      &err);
  if (config.task == Task::Asr) out << "# skipped_clips=" << result.skipped_clips << "\n";
  if (!save_path.empty()) save_params(result.params, save_path);
  return kExitOk;
}

int cmd_eval(const DataFlags& d, const std::string& bank_path, const std::string& mask_text,
             const std::string& which, std::ostream& out) {
  const ModelParams params = load_params(bank_path);
  std::string mask_str = mask_text;
  std::replace(mask_str.begin(), mask_str.end(), '+', ',');
  const MaskSpec mask = parse_mask(mask_str);
  DataFlags df = d;
  df.task = std::string(task_name(params.task));
  const Dataset data = load_dataset(df, params.task);
  const DataSplit split = split_dataset(data.manifest);
  std::vector<std::size_t> indices;
  if (which == "eval") {
    indices = split.eval;
  } else if (which == "train") {
    indices = split.train;
  } else {
    for (std::size_t i = 0; i < data.clips.size(); ++i) indices.push_back(i);
  }
  if (params.task == Task::Asr) {
    std::erase_if(indices, [&](std::size_t i) { return data.clips[i].label.symbols.empty(); });
  }
  if (indices.empty()) throw Error("eval: no clips in the '" + which + "' split");
  const double metric = evaluate(params, data, indices, mask);
  out << "task,split,clips,metric\n"
      << task_name(params.task) << "," << which << "," << indices.size() << "," << format_double(metric) << "\n";
  return kExitOk;
}

int cmd_ablate_mask(const DataFlags& d, const TrainFlags& t, const std::string& masks, const std::string& settings,
                    std::ostream& out, std::ostream& err) {
  std::vector<TrainConfig> runs;
  for (const auto& s : split(settings, ',')) {
    for (const auto& m : split(masks, ',')) {
      TrainFlags tf = t;
      tf.setting = s;
      tf.mask = m;
      runs.push_back(to_train_config(d, tf));
    }
  }
  if (runs.empty()) throw UsageError("ablate-mask: no masks or settings given");
  const Dataset data = load_dataset(d, runs.front().task);
  out << "setting,trainable_mel,mask,metric\n";
  for (const auto& config : runs) {
    const TrainResult r = train(config, data, {}, &err);
    const bool mel = trainable_groups(config.setting).contains(ParamGroup::Mel);
    std::string mask = config.mask.to_string();
    std::replace(mask.begin(), mask.end(), ',', '+');
    out << setting_name(config.setting) << "," << (mel ? "yes" : "no") << "," << mask << ","
        << format_double(final_metric(r)) << "\n"
        << std::flush;
  }
  return kExitOk;
}

int cmd_ablate_mels(const DataFlags& d, const TrainFlags& t, const std::string& mels, const std::string& settings,
                    std::ostream& out, std::ostream& err) {
  std::vector<TrainConfig> runs;
  for (const auto& m : split(mels, ',')) {
    int n = 0;
    try {
      n = std::stoi(m);
    } catch (const std::exception&) {
      throw UsageError("ablate-mels: bad Mel count '" + m + "'");
    }
    for (const auto& s : split(settings, ',')) {
      TrainFlags tf = t;
      tf.setting = s;
      tf.n_mels = n;
      runs.push_back(to_train_config(d, tf));
    }
  }
  if (runs.empty()) throw UsageError("ablate-mels: no Mel counts or settings given");
  const Dataset data = load_dataset(d, runs.front().task);
  out << "n_mels,setting,metric\n";
  for (const auto& config : runs) {
    const TrainResult r = train(config, data, {}, &err);
    out << config.n_mels << "," << setting_name(config.setting) << "," << format_double(final_metric(r)) << "\n"
        << std::flush;
  }
  return kExitOk;
}

int cmd_inspect(const std::string& bank_path, const std::string& out_dir, const std::string& bins,
                std::ostream& out) {
  const ModelParams params = load_params(bank_path);
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  std::vector<int> bin_list;
  for (const auto& b : split(bins, ',')) {
    int k = -1;
    try {
      k = std::stoi(b);
    } catch (const std::exception&) {
      throw UsageError("inspect: bad bin '" + b + "'");
    }
    if (k < 0 || k >= params.stft.n_bins()) throw UsageError("inspect: bin " + b + " out of range");
    bin_list.push_back(k);
  }
  out << "file,rows,cols\n";
  const auto report = [&](const std::string& name, Eigen::Index rows, Eigen::Index cols) {
    out << (dir / name).string() << "," << rows << "," << cols << "\n";
  };
  export_bank_csv(params.mel.weights, "mel.weights", dir / "mel_weights.csv");
  report("mel_weights.csv", params.mel.weights.rows(), params.mel.weights.cols());
  const auto mel_imp = cumulative_importance(params.mel);
  export_vector_csv(mel_imp, "mel.importance", dir / "mel_importance.csv");
  report("mel_importance.csv", static_cast<Eigen::Index>(mel_imp.size()), 1);
  const auto stft_imp = stft_cumulative_importance(params.stft);
  export_vector_csv(stft_imp, "stft.importance", dir / "stft_importance.csv");
  report("stft_importance.csv", static_cast<Eigen::Index>(stft_imp.size()), 1);
  for (int k : bin_list) {
    Matrix kernel(2, params.stft.real.cols());
    kernel.row(0) = params.stft.real.row(k);
    kernel.row(1) = params.stft.imag.row(k);
    const std::string kname = "stft_kernel_" + std::to_string(k) + ".csv";
    export_bank_csv(kernel, "stft.kernel." + std::to_string(k), dir / kname);
    report(kname, kernel.rows(), kernel.cols());
    const auto spectrum = kernel_dft(params.stft, k);
    const std::string dname = "kernel_dft_" + std::to_string(k) + ".csv";
    export_vector_csv(spectrum, "kernel_dft." + std::to_string(k), dir / dname);
    report(dname, static_cast<Eigen::Index>(spectrum.size()), 1);
  }
  return kExitOk;
}

int cmd_gradcheck(std::uint64_t seed, double step, double tolerance, std::ostream& out) {
  GradcheckOptions opt;
  opt.step = step;
  opt.tolerance = tolerance;
  bool ok = true;
  out << "suite,checked,max_rel_error,status\n";
  for (const auto& r : run_gradcheck_suites(seed, opt)) {
    ok = ok && r.passed();
    char err_buf[32];
    std::snprintf(err_buf, sizeof err_buf, "%.3e", r.max_rel_error);
    out << r.suite << "," << r.checked << "," << err_buf << "," << (r.passed() ? "pass" : "FAIL") << "\n";
  }
  return ok ? kExitOk : kExitFailure;
}

// Splices config-file entries in as flags unless the command line already
// sets them.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      path = args[++i];
    } else if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::stringstream text;
  text << in.rdbuf();
  std::vector<std::string> injected;
  for (const auto& [key, value] : parse_config_text(text.str())) {
    const std::string flag = "--" + normalize_key(key);
    const bool on_command_line = std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
      return a == flag || a.starts_with(flag + "=");
    });
    if (!on_command_line) injected.push_back(flag + "=" + value);
  }
  // Subcommand first, then config entries, then the user's flags.
  std::vector<std::string> merged;
  if (rest.size() > 1) {
    merged.assign(rest.begin(), rest.begin() + 2);
    merged.insert(merged.end(), injected.begin(), injected.end());
    merged.insert(merged.end(), rest.begin() + 2, rest.end());
  } else {
    merged = rest;
    merged.insert(merged.end(), injected.begin(), injected.end());
  }
  return merged;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trainable STFT and Mel front-ends for keyword spotting and phoneme recognition.", "tfront"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  DataFlags data;
  TrainFlags tf;
  std::string config_sink;

  auto* synth = app.add_subcommand("synth", "Write a deterministic toy dataset manifest");
  std::string synth_out, synth_wav_dir;
  synth->add_option("--task", data.task, "Task: kws (12-way keywords) or asr (61 phonemes, CTC)")
      ->check(CLI::IsMember({"kws", "asr"}));
  synth->add_option("--n-per-class", data.synth,
                    "Clips per class (kws) or utterances (asr); 0 = 50 / 100")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", data.data_seed, "Dataset seed");
  synth->add_option("--out", synth_out, "Manifest CSV to write")->required();
  synth->add_option("--wav-dir", synth_wav_dir, "Also render 16-bit WAV files here and reference them");
  add_config_flag(synth, config_sink);

  auto* train_cmd = app.add_subcommand("train", "Train a front-end and classifier; one CSV row per epoch");
  std::string ckpt_dir, csv_out, save_path;
  add_data_flags(train_cmd, data, true);
  add_model_flags(train_cmd, tf, true, true, true);
  train_cmd->add_option("--ckpt-dir", ckpt_dir, "Write epoch_NNN.bank checkpoints here");
  train_cmd->add_option("--out", csv_out, "Also write the epoch CSV (without wall time) here");
  train_cmd->add_option("--save", save_path, "Write the final parameter bank here");
  add_config_flag(train_cmd, config_sink);

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a parameter bank (accuracy % or PER %)");
  std::string eval_bank, eval_mask = "none", eval_split = "eval";
  eval_cmd->add_option("--bank", eval_bank, "Parameter bank written by train")->required();
  add_data_flags(eval_cmd, data, false);
  eval_cmd->add_option("--mask", eval_mask, "STFT bins zeroed before the Mel stage");
  eval_cmd->add_option("--split", eval_split, "Clips to score: eval, train or all")
      ->check(CLI::IsMember({"eval", "train", "all"}));
  add_config_flag(eval_cmd, config_sink);

  auto* mask_cmd = app.add_subcommand("ablate-mask", "Train once per (setting, mask); final metric per row");
  std::string masks = "25-49,25-74,216-240,191-240,none", mask_settings = "B";
  add_data_flags(mask_cmd, data, true);
  add_model_flags(mask_cmd, tf, false, false, true);
  mask_cmd->add_option("--masks", masks, "Comma-separated masks; '+' joins ranges within one mask");
  mask_cmd->add_option("--settings", mask_settings, "Comma-separated settings (B: trainable Mel, A: frozen)");
  add_config_flag(mask_cmd, config_sink);

  auto* mels_cmd = app.add_subcommand("ablate-mels", "Train once per (Mel count, setting); final metric per row");
  std::string mel_counts = "10,20,30,40", mel_settings = "A,B,C,D";
  add_data_flags(mels_cmd, data, true);
  add_model_flags(mels_cmd, tf, false, true, false);
  mels_cmd->add_option("--n-mels-list", mel_counts, "Comma-separated Mel filter counts");
  mels_cmd->add_option("--settings", mel_settings, "Comma-separated settings");
  add_config_flag(mels_cmd, config_sink);

  auto* inspect_cmd = app.add_subcommand("inspect", "Export Mel bank, importance curves and kernel spectra as CSV");
  std::string inspect_bank, inspect_dir = ".", inspect_bins = "25";
  inspect_cmd->add_option("--bank", inspect_bank, "Parameter bank written by train")->required();
  inspect_cmd->add_option("--out-dir", inspect_dir, "Directory for the exported CSV files");
  inspect_cmd->add_option("--bins", inspect_bins, "Comma-separated STFT bins whose kernels and spectra to export");
  add_config_flag(inspect_cmd, config_sink);

  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference check of every hand-written backward pass");
  std::uint64_t grad_seed = 0;
  double grad_step = 1e-4, grad_tol = 1e-4;
  grad_cmd->add_option("--seed", grad_seed, "Seed for the random probes");
  grad_cmd->add_option("--step", grad_step, "Central-difference step")->check(CLI::PositiveNumber);
  grad_cmd->add_option("--tolerance", grad_tol, "Maximum relative error")->check(CLI::PositiveNumber);
  add_config_flag(grad_cmd, config_sink);

  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  out << effective_config(sub) << "\n";
  // Configuration problems (bad mask text, inconsistent options) are usage
  // errors; anything raised once work has started is a runtime failure.
  const auto guarded = [&](auto&& fn) -> int {
    try {
      return fn();
    } catch (const UsageError& e) {
      err << "error: " << e.what() << "\n" << sub->help();
      return kExitUsage;
    } catch (const ArgumentError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitFailure;
    }
  };
  if (sub == synth) return guarded([&] { return cmd_synth(data, synth_out, synth_wav_dir, out); });
  if (sub == train_cmd) return guarded([&] { return cmd_train(data, tf, ckpt_dir, csv_out, save_path, out, err); });
  if (sub == eval_cmd) return guarded([&] { return cmd_eval(data, eval_bank, eval_mask, eval_split, out); });
  if (sub == mask_cmd) return guarded([&] { return cmd_ablate_mask(data, tf, masks, mask_settings, out, err); });
  if (sub == mels_cmd) return guarded([&] { return cmd_ablate_mels(data, tf, mel_counts, mel_settings, out, err); });
  if (sub == inspect_cmd) return guarded([&] { return cmd_inspect(inspect_bank, inspect_dir, inspect_bins, out); });
  return guarded([&] { return cmd_gradcheck(grad_seed, grad_step, grad_tol, out); });
}

}  // namespace tfront
