#include <CLI11.hpp>
#include <ostream>

#include "dplab/cli/bench.hpp"
#include "dplab/cli/commands.hpp"
#include "dplab/errors.hpp"

namespace dplab::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"dplab: phantom generation, noise, classical and learned denoising benchmarks"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "generate synthetic phantoms");
  g->add_option("--count", gen.count, "number of phantoms")->required();
  g->add_option("--size", gen.size, "side length in pixels")->capture_default_str();
  g->add_option("--seed", gen.seed, "base seed; phantom i uses seed + i")->capture_default_str();
  g->add_option("--ellipses", gen.ellipses)->capture_default_str();
  g->add_option("--texture", gen.texture, "sinusoidal texture amplitude")->capture_default_str();
  g->add_option("--out", gen.out, "output directory")->required();

  CorruptOptions cor;
  bool no_clip = false;
  auto* c = app.add_subcommand("corrupt", "add simulated noise to clean images");
  c->add_option("--noise", cor.noise, "gaussian, awgn or speckle")->required();
  c->add_option("--seed", cor.seed, "base seed; image i uses seed + i")->capture_default_str();
  c->add_option("--in", cor.in, "directory of clean images")->required();
  c->add_option("--out", cor.out, "output directory")->required();
  c->add_option("--param", cor.params, "override, e.g. var=0.01")->take_all();
  c->add_flag("--no-clip", no_clip, "keep values outside [0, 1]");

  DenoiseOptions den;
  auto* d = app.add_subcommand("denoise", "run a classical filter over a set of images");
  d->add_option("--algo", den.algo, "filter name")->required();
  d->add_option("--in", den.in, "pairs manifest or image directory")->required();
  d->add_option("--out", den.out, "output directory")->required();
  d->add_option("--sigma", den.sigma, "noise std; estimated when omitted");
  d->add_option("--param", den.params, "filter override, e.g. radius=2")->take_all();

  TrainOptions tr;
  auto* t = app.add_subcommand("train", "train the dual-path model or the U-Net baseline");
  t->add_option("--model", tr.model, "dpl or unet")->capture_default_str();
  t->add_option("--data", tr.data, "pairs manifest")->required();
  t->add_option("--iters", tr.iters)->capture_default_str();
  t->add_option("--epochs", tr.epochs, "epoch budget (overrides --iters)");
  t->add_option("--batch", tr.batch)->capture_default_str();
  t->add_option("--lr", tr.lr)->capture_default_str();
  t->add_option("--seed", tr.seed)->capture_default_str();
  t->add_option("--depth", tr.depth)->capture_default_str();
  t->add_option("--base", tr.base, "first-stage channels")->capture_default_str();
  t->add_option("--train-ratio", tr.train_ratio)->capture_default_str();
  t->add_option("--eval-interval", tr.eval_interval)->capture_default_str();
  t->add_option("--out", tr.out, "output directory")->required();

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "score outputs against clean images");
  e->add_option("--pairs", ev.pairs, "pairs manifest")->required();
  e->add_option("--csv", ev.csv, "metric report path")->required();
  e->add_option("--algo", ev.algo, "run this filter and score it");
  e->add_option("--checkpoint", ev.checkpoint, "score a trained model");
  e->add_option("--denoised", ev.denoised, "directory of <id>.dplf outputs to score");
  e->add_option("--label", ev.label, "algorithm name for --denoised rows")->capture_default_str();
  e->add_option("--model", ev.model)->capture_default_str();
  e->add_option("--depth", ev.depth)->capture_default_str();
  e->add_option("--base", ev.base)->capture_default_str();
  e->add_option("--sigma", ev.sigma);
  e->add_option("--param", ev.params)->take_all();

  fs::path bench_path;
  std::optional<std::uint64_t> bench_seed;
  std::optional<fs::path> bench_out;
  auto* b = app.add_subcommand("bench", "run a full benchmark from a config file");
  b->add_option("--config", bench_path)->required();
  b->add_option("--seed", bench_seed, "overrides the config seed");
  b->add_option("--out", bench_out, "overrides the config output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) cmd_gen(gen, out);
    if (*c) {
      cor.clip = !no_clip;
      cmd_corrupt(cor, out);
    }
    if (*d) cmd_denoise(den, out);
    if (*t) cmd_train(tr, out);
    if (*e) cmd_eval(ev, out);
    if (*b) {
      BenchConfig cfg = load_bench_config(bench_path);
      if (bench_seed) {
        cfg.seed = *bench_seed;
        cfg.train.seed = *bench_seed;
      }
      if (bench_out) cfg.out = *bench_out;
      return cmd_bench(cfg, err);
    }
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const IoError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const IncompatibleError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitIncompatible;
  } catch (const FormatError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitIncompatible;
  } catch (const TrainingError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitIncompatible;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace dplab::cli
