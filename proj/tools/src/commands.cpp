#include "dplab/cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "dplab/cli/manifest.hpp"
#include "dplab/errors.hpp"
#include "dplab/image_io.hpp"
#include "dplab/noise.hpp"
#include "dplab/phantom.hpp"
#include "dplab/report.hpp"
#include "dplab/train.hpp"

namespace dplab::cli {

namespace {

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

std::string phantom_id(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "phantom_%04d", index);
  return buf;
}

/// Pair manifest inputs: a CSV file, or a directory holding pairs.csv.
std::optional<fs::path> pair_manifest_of(const fs::path& in) {
  if (fs::is_regular_file(in)) return in;
  if (fs::is_regular_file(in / kPairManifest)) return in / kPairManifest;
  return std::nullopt;
}

struct NamedInput {
  std::string id;
  fs::path path;
};

std::vector<NamedInput> denoise_inputs(const fs::path& in) {
  std::vector<NamedInput> out;
  if (const auto manifest = pair_manifest_of(in)) {
    for (const auto& e : read_pair_manifest(*manifest)) out.push_back({e.id, e.noisy});
  } else {
    for (const auto& e : discover_images(in)) out.push_back({e.id, e.path});
  }
  return out;
}

nn::UNetConfig net_config(int depth, int base) {
  nn::UNetConfig cfg{1, depth, base, 1};
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void require_trainable(const std::vector<PairSample>& data, const nn::UNetConfig& cfg) {
  for (const auto& s : data) {
    if (s.noisy.width() != s.clean.width() || s.noisy.height() != s.clean.height()) {
      throw IncompatibleError(s.id + ": noisy and clean images differ in size");
    }
    if (!cfg.accepts(s.clean.height(), s.clean.width())) {
      throw IncompatibleError(s.id + ": " + std::to_string(s.clean.width()) + "x" +
                              std::to_string(s.clean.height()) + " is not divisible by 2^" +
                              std::to_string(cfg.depth) + " = " + std::to_string(1 << cfg.depth) +
                              " as required by a depth-" + std::to_string(cfg.depth) + " U-Net");
    }
    if (s.clean.width() != data.front().clean.width() || s.clean.height() != data.front().clean.height()) {
      throw IncompatibleError(s.id + ": all training images must share one size");
    }
  }
}

}  // namespace

ParamOverrides parse_params(const std::vector<std::string>& params) {
  ParamOverrides out;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + p + "'");
    const std::string value = p.substr(eq + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      out[p.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw UsageError("parameter '" + p.substr(0, eq) + "' needs a number, got '" + value + "'");
    }
  }
  return out;
}

void cmd_gen(const GenOptions& o, std::ostream& log) {
  if (o.count < 1) throw UsageError("--count must be at least 1");
  make_dir(o.out);
  std::vector<PhantomEntry> entries;
  for (int i = 0; i < o.count; ++i) {
    const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
    PhantomSpec spec = [&] {
      try {
        return PhantomSpec(o.size, o.ellipses, static_cast<float>(o.texture), seed);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }();
    const Image img = gen_phantom(spec);
    const std::string id = phantom_id(i);
    save_raw(img, o.out / (id + ".dplf"));
    save_pgm(img, o.out / (id + ".pgm"));
    entries.push_back({id, o.out / (id + ".dplf"), o.size, seed});
  }
  write_phantom_manifest(o.out / kPhantomManifest, entries);
  log << "wrote " << o.count << " phantoms to " << o.out.string() << '\n';
}

void cmd_corrupt(const CorruptOptions& o, std::ostream& log) {
  NoiseSpec base;
  try {
    base = NoiseSpec::defaults(parse_noise_family(o.noise));
    for (const auto& [k, v] : parse_params(o.params)) base.set_param(k, v);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  base.clip = o.clip;
  const auto inputs = discover_images(o.in);
  if (inputs.empty()) throw UsageError("no .dplf images in " + o.in.string());
  make_dir(o.out);
  std::vector<PairEntry> pairs;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    NoiseSpec spec = base;
    spec.seed = o.seed + i;
    const Image noisy = apply_noise(load_raw(inputs[i].path), spec);
    const fs::path path = o.out / (inputs[i].id + "_" + std::string(to_string(spec.family())) + ".dplf");
    save_raw(noisy, path);
    pairs.push_back({inputs[i].id, inputs[i].path, path, std::string(to_string(spec.family())), spec.describe(),
                     spec.seed});
  }
  write_pair_manifest(o.out / kPairManifest, pairs);
  log << "corrupted " << pairs.size() << " images with " << o.noise << " (" << base.describe() << ")\n";
}

void cmd_denoise(const DenoiseOptions& o, std::ostream& log) {
  if (!is_classic_algorithm(o.algo)) {
    std::string names;
    for (const auto& n : classic_algorithms()) names += (names.empty() ? "" : ", ") + n;
    throw UsageError("unknown algorithm '" + o.algo + "'; valid: " + names);
  }
  const ParamOverrides overrides = parse_params(o.params);
  const auto inputs = denoise_inputs(o.in);
  if (inputs.empty()) throw UsageError("no inputs in " + o.in.string());
  make_dir(o.out);
  std::ofstream timings(o.out / "timings.csv", std::ios::binary);
  if (!timings) throw IoError("cannot write " + (o.out / "timings.csv").string());
  timings << "image_id,algorithm,seconds\n";
  for (const auto& in : inputs) {
    const Image noisy = load_raw(in.path);
    const auto t0 = std::chrono::steady_clock::now();
    Image out;
    try {
      out = run_classic(o.algo, noisy, o.sigma, overrides);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    save_raw(out, o.out / (in.id + ".dplf"));
    timings << in.id << ',' << o.algo << ',' << format_number(secs) << '\n';
  }
  log << "denoised " << inputs.size() << " images with " << o.algo << '\n';
}

void cmd_train(const TrainOptions& o, std::ostream& log) {
  TrainConfig cfg;
  try {
    cfg.model = parse_model_kind(o.model);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.iterations = o.iters;
  cfg.epochs = o.epochs;
  cfg.batch_size = o.batch;
  cfg.lr = o.lr;
  cfg.seed = o.seed;
  cfg.depth = o.depth;
  cfg.base_channels = o.base;
  cfg.train_ratio = o.train_ratio;
  cfg.eval_interval = o.eval_interval;
  cfg.dump_dir = o.out;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!(o.train_ratio > 0.0 && o.train_ratio < 1.0)) throw UsageError("--train-ratio must be in (0, 1)");
  const auto manifest = pair_manifest_of(o.data);
  if (!manifest) throw UsageError("no pairs manifest at " + o.data.string());
  const auto data = load_pairs(read_pair_manifest(*manifest));
  if (data.empty()) throw UsageError("empty pairs manifest " + manifest->string());
  require_trainable(data, net_config(o.depth, o.base));
  make_dir(o.out);

  const TrainResult result = train(cfg, data);
  result.model.save(o.out / "model.dplw");
  write_loss_curve(o.out / "loss.csv", result.curve);
  const auto val = select(data, result.split.val.empty() ? result.split.train : result.split.val);
  evaluate(result.model, val).write_csv(o.out / "val_metrics.csv");
  log << "trained " << o.model << " for " << result.iterations_run << " iterations (" << result.epochs_run
      << " epochs); best validation PSNR " << format_number(result.best_val_psnr) << " dB at iteration "
      << result.best_iter << '\n';
}

void cmd_eval(const EvalOptions& o, std::ostream& log) {
  const int selectors = int(o.algo.has_value()) + int(o.checkpoint.has_value()) + int(o.denoised.has_value());
  if (selectors > 1) throw UsageError("use at most one of --algo, --checkpoint, --denoised");
  const auto manifest = pair_manifest_of(o.pairs);
  if (!manifest) throw UsageError("no pairs manifest at " + o.pairs.string());
  const auto data = load_pairs(read_pair_manifest(*manifest));

  MetricReport report;
  if (o.checkpoint) {
    ModelKind kind;
    try {
      kind = parse_model_kind(o.model);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const auto net = net_config(o.depth, o.base);
    DplModel<float> model(kind, net, {}, 0);
    try {
      model.load(*o.checkpoint);
    } catch (const FormatError& e) {
      throw IncompatibleError(std::string("checkpoint does not match the model: ") + e.what());
    }
    for (const auto& s : data) {
      if (!net.accepts(s.noisy.height(), s.noisy.width())) {
        throw IncompatibleError(s.id + ": size not divisible by 2^" + std::to_string(o.depth));
      }
    }
    report = evaluate(model, data);
  } else {
    const ParamOverrides overrides = parse_params(o.params);
    if (o.algo && !is_classic_algorithm(*o.algo)) throw UsageError("unknown algorithm '" + *o.algo + "'");
    for (const auto& s : data) {
      if (o.algo) {
        report.add(s.id, *o.algo, s.noise, s.clean, run_classic(*o.algo, s.noisy, o.sigma, overrides));
      } else if (o.denoised) {
        const Image d = load_raw(*o.denoised / (s.id + ".dplf"));
        if (!d.same_shape(s.clean)) throw IncompatibleError(s.id + ": denoised image has a different size");
        report.add(s.id, o.label, s.noise, s.clean, d);
      }
      report.add(s.id, "noisy", s.noise, s.clean, s.noisy);
    }
  }
  if (o.csv.has_parent_path()) make_dir(o.csv.parent_path());
  report.write_csv(o.csv);
  for (const auto& r : report.aggregates()) {
    log << r.algorithm << " (" << r.noise << "): psnr " << format_number(r.psnr_db) << " dB, ssim "
        << format_number(r.ssim) << '\n';
  }
}

}  // namespace dplab::cli
