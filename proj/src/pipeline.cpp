#include "covplan/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <span>
#include <thread>
#include <vector>

#include "covplan/csv.hpp"
#include "covplan/errors.hpp"
#include "covplan/serialization.hpp"
#include "covplan/synthetic.hpp"

namespace covplan {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void require_data(bool ok, const std::string& msg) {
  if (!ok) throw DataError(msg);
}

Provenance make_provenance(const RunConfig& cfg, int dims) {
  Provenance p;
  p.config_hash = hash_hex(cfg.config_hash());
  p.seed = cfg.cloud.seed;
  p.dims = dims;
  return p;
}

std::vector<std::string> provenance_comments(const Provenance& p) {
  return {"config_hash = " + p.config_hash, "seed = " + std::to_string(p.seed)};
}

void write_resolved_config(const CommandContext& ctx) {
  const std::string path = join(ctx.out_dir, "resolved_config.toml");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "# config_hash = " << hash_hex(ctx.config.config_hash()) << "\n"
      << ctx.config.resolved_toml();
  out.flush();
  if (!out) throw DataError("write failed: " + path);
}

PointsCsv read_input_points(const RunConfig& cfg, const char* command) {
  require_data(!cfg.input.empty(),
               std::string(command) + " needs [io].input pointing at a parameter-set CSV");
  PointsCsv data = read_points_csv(cfg.input);
  if (cfg.has_space && data.dim_names.size() != cfg.space.lower.size())
    throw DataError(cfg.input + " has " + std::to_string(data.dim_names.size()) +
                    " dimensions, the configured space has " +
                    std::to_string(cfg.space.lower.size()));
  return data;
}

// One shared construction path for every generator kind; `stream` pins the
// draw sequence. Seed data is copied so the source outlives its inputs.
PointSource make_source(const RunConfig& cfg, const ParameterSpace& space,
                        std::span<const ParameterPoint> seed_data, std::uint64_t stream) {
  const GeneratorConfig& g = cfg.generator;
  require_data(!g.kind.empty(), "this command needs a [generator] section");
  std::shared_ptr<SyntheticSource> source;
  if (g.kind == "uniform") {
    source = std::make_shared<SyntheticSource>(SyntheticSource::uniform_box(space, stream));
  } else if (g.kind == "mixture") {
    source =
        std::make_shared<SyntheticSource>(SyntheticSource::gaussian_mixture(g.mixture, stream));
    require_data(source->dims() == space.dims(),
                 "[generator] mixture dimension does not match the space");
  } else if (g.kind == "degradable") {
    require_data(!seed_data.empty(),
                 "generator kind \"degradable\" needs seed data ([io].input)");
    require_data(cfg.has_kernel, "generator kind \"degradable\" needs [kernel].semi_axes");
    source = std::make_shared<SyntheticSource>(SyntheticSource::degradable(
        std::vector<ParameterPoint>(seed_data.begin(), seed_data.end()), g.leak,
        cfg.kernel.semi_axes, space, stream));
  } else {  // "replay"; config validation admits no other value
    require_data(!seed_data.empty(), "generator kind \"replay\" needs seed data ([io].input)");
    source = std::make_shared<SyntheticSource>(
        SyntheticSource::replay(std::vector<ParameterPoint>(seed_data.begin(), seed_data.end())));
  }
  return [source]() { return source->draw_one(); };
}

}  // namespace

int cmd_coverage(const CommandContext& ctx) {
  const RunConfig& cfg = ctx.config;
  const ParameterSpace space = cfg.parameter_space();
  require_data(cfg.has_kernel, "coverage needs a [kernel] section");
  const PointsCsv data = read_input_points(cfg, "coverage");

  const SampleCloud cloud(space, cfg.cloud.seed, static_cast<std::size_t>(cfg.cloud.samples));
  FitOptions options;
  options.require_monotone = cfg.fit.require_monotone;
  const BootstrapFit fit =
      bootstrap_fit(data.points, cfg.kernel.semi_axes, cloud, cfg.fit.replicates,
                    cfg.cloud.seed, 0.0, cfg.fit.cv_threshold, options, ctx.threads);

  SampleCloud curve_cloud = cloud;
  const std::vector<CurvePoint> curve =
      coverage_curve(data.points, cfg.kernel.semi_axes, curve_cloud);

  const Provenance provenance = make_provenance(cfg, space.dims());
  std::vector<std::vector<std::string>> rows;
  rows.reserve(curve.size());
  for (const CurvePoint& p : curve)
    rows.push_back({std::to_string(p.count), format_double(p.volume)});
  write_table_csv(join(ctx.out_dir, "curve.csv"), {"count", "volume"}, rows,
                  provenance_comments(provenance));

  write_json_file(join(ctx.out_dir, "coverage_model.json"),
                  {{"model", to_json_value(fit.model)},
                   {"diagnostics", to_json_value(fit.diagnostics)},
                   {"provenance", to_json_value(provenance)}});

  // The fitted curve doubles as the mining meta model, ready for `plan`.
  AcquisitionMetaModel mining;
  mining.name = "mining";
  mining.kind = AcquisitionKind::mining;
  mining.costs = cfg.mining_costs;
  mining.coverage_models.emplace_back(0, fit.model);
  mining.validate();
  write_json_file(join(ctx.out_dir, "mining_metamodel.json"),
                  metamodel_to_json(mining, provenance));

  write_resolved_config(ctx);

  std::cout << "coverage model: a = " << format_double(fit.model.a)
            << ", b = " << format_double(fit.model.b)
            << ", c = " << format_double(fit.model.c)
            << ", v_pre = " << format_double(fit.model.v_pre) << "\n"
            << "bootstrap cv(a) = " << format_double(fit.diagnostics.param_cv[0]) << " over "
            << fit.diagnostics.replicates << " replicates ("
            << fit.diagnostics.failed << " failed), threshold "
            << format_double(fit.diagnostics.cv_threshold) << "\n"
            << (fit.diagnostics.converged ? "fit converged" : "fit did NOT converge") << "\n";
  return fit.diagnostics.converged ? 0 : 3;
}

int cmd_metamodel(const CommandContext& ctx) {
  const RunConfig& cfg = ctx.config;
  const ParameterSpace space = cfg.parameter_space();
  require_data(cfg.has_kernel, "metamodel needs a [kernel] section");
  require_data(!cfg.generator.kind.empty(), "metamodel needs a [generator] section");
  const PointsCsv data = read_input_points(cfg, "metamodel");

  const ReferenceVolume ref =
      build_reference_volume(data.points, cfg.kernel.semi_axes, cfg.kernel.dilation, space);
  const SampleCloud cloud(space, cfg.cloud.seed, static_cast<std::size_t>(cfg.cloud.samples));

  const GeneratorFactory factory = [&cfg, &space](std::span<const ParameterPoint> seed_data,
                                                  std::uint64_t stream) {
    return make_source(cfg, space, seed_data, stream);
  };

  MetamodelFitConfig fit_config;
  fit_config.name = cfg.metamodel.name;
  fit_config.costs = cfg.generation_costs;
  fit_config.semi_axes = cfg.kernel.semi_axes;
  fit_config.seed = cfg.cloud.seed;
  fit_config.fit.require_monotone = cfg.fit.require_monotone;
  fit_config.threads = ctx.threads;

  const AcquisitionMetaModel model =
      fit_generation_metamodel(cfg.metamodel.grid, data.points, factory, ref,
                               cfg.metamodel.per_grid_sample, cloud, fit_config);

  const Provenance provenance = make_provenance(cfg, space.dims());
  write_json_file(join(ctx.out_dir, "generation_metamodel.json"),
                  metamodel_to_json(model, provenance));
  write_resolved_config(ctx);

  std::cout << "generation meta model \"" << model.name << "\" over "
            << model.coverage_models.size() << " entry points\n";
  for (const auto& [entry, rate] : model.error_rate.samples())
    std::cout << "  error(" << entry << ") = " << format_double(rate) << "\n";
  return 0;
}

namespace {

void print_plan(const AcquisitionPlan& plan, const QualityRequirements& req) {
  const auto money = [](double v) { return format_double(v); };
  std::cout << "acquisition plan\n"
            << "  feasible             " << (plan.feasible ? "yes" : "NO") << "\n"
            << "  mined scenarios      " << plan.n_mine << "\n"
            << "  generated scenarios  " << plan.n_gen << "\n"
            << "  e_opt                " << format_double(plan.check.e_opt) << "\n"
            << "  improvement checks   " << plan.check.n_improv << "\n"
            << "  spot checks          " << plan.check.n_rand_corr << " (cochran "
            << plan.check.n_rand << ")\n"
            << "  mining cost          " << money(plan.mining_cost) << "\n"
            << "  generation cost      " << money(plan.generation_cost) << "\n"
            << "  checking cost        " << money(plan.checking_cost) << "\n"
            << "  setup cost           " << money(plan.setup_cost) << "\n"
            << "  total cost           " << money(plan.total_cost) << "\n"
            << "  achieved coverage    " << format_double(plan.achieved_coverage)
            << " (target " << format_double(req.target_coverage) << ")\n";
  if (plan.check.forced_full_sweep)
    std::cout << "  note: allowed_error of 0 forces checking every scenario\n";
}

}  // namespace

int cmd_plan(const CommandContext& ctx) {
  const RunConfig& cfg = ctx.config;
  require_data(!cfg.plan.mining_model.empty() && !cfg.plan.generation_model.empty(),
               "plan needs [plan].mining_model and [plan].generation_model");

  StoredMetaModel mining;
  StoredMetaModel generation;
  try {
    mining = metamodel_from_json(load_json_file(cfg.plan.mining_model));
    generation = metamodel_from_json(load_json_file(cfg.plan.generation_model));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed meta model JSON: ") + e.what());
  }
  require_data(mining.model.kind == AcquisitionKind::mining,
               cfg.plan.mining_model + " is not a mining meta model");
  require_data(generation.model.kind == AcquisitionKind::generation,
               cfg.plan.generation_model + " is not a generation meta model");
  if (mining.provenance.dims > 0 && generation.provenance.dims > 0)
    require_data(mining.provenance.dims == generation.provenance.dims,
                 "meta models disagree on the space dimension (" +
                     std::to_string(mining.provenance.dims) + " vs " +
                     std::to_string(generation.provenance.dims) + ")");

  PlanOptions options;
  options.check.mandate_audit = cfg.plan.mandate_audit;
  options.check.unscaled_improvement = cfg.plan.unscaled_improvement;

  const AcquisitionPlan plan =
      optimize_acquisition(mining.model, generation.model, cfg.quality, options);

  const int dims =
      mining.provenance.dims > 0 ? mining.provenance.dims : generation.provenance.dims;
  const Provenance provenance = make_provenance(cfg, dims);
  write_json_file(join(ctx.out_dir, "plan.json"), {{"plan", to_json_value(plan)},
                                                   {"quality", to_json_value(cfg.quality)},
                                                   {"provenance", to_json_value(provenance)}});

  if (cfg.sweep) {
    const SweepAxis axis = sweep_axis_from_name(cfg.sweep->axis);
    const std::vector<SweepRow> rows = sensitivity_sweep(
        mining.model, generation.model, cfg.quality, axis, cfg.sweep->values, options,
        ctx.threads);
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const SweepRow& r : rows)
      cells.push_back({format_double(r.axis_value), format_double(r.total_cost),
                       std::to_string(r.n_mine), std::to_string(r.n_gen),
                       std::to_string(r.n_check), r.feasible ? "1" : "0"});
    std::vector<std::string> comments = provenance_comments(provenance);
    comments.push_back("axis = " + sweep_axis_name(axis));
    write_table_csv(join(ctx.out_dir, "sweep.csv"),
                    {"axis_value", "total_cost", "n_mine", "n_gen", "n_check", "feasible"},
                    cells, comments);
  }

  write_resolved_config(ctx);
  print_plan(plan, cfg.quality);
  return plan.feasible ? 0 : 4;
}

int cmd_synth(const CommandContext& ctx) {
  const RunConfig& cfg = ctx.config;
  const ParameterSpace space = cfg.parameter_space();
  require_data(!cfg.generator.kind.empty(), "synth needs a [generator] section");

  std::vector<ParameterPoint> seed_data;
  if (cfg.generator.kind == "degradable" || cfg.generator.kind == "replay")
    seed_data = read_input_points(cfg, "synth").points;

  PointSource source = make_source(cfg, space, seed_data, cfg.cloud.seed);
  std::vector<ParameterPoint> points;
  points.reserve(static_cast<std::size_t>(cfg.synth.count));
  for (std::int64_t i = 0; i < cfg.synth.count; ++i) points.push_back(source());

  const Provenance provenance = make_provenance(cfg, space.dims());
  write_points_csv(join(ctx.out_dir, "synth.csv"), cfg.space.names, points,
                   provenance_comments(provenance));
  write_resolved_config(ctx);

  std::cout << "wrote " << points.size() << " points to "
            << join(ctx.out_dir, "synth.csv") << "\n";
  return 0;
}

int run_cli(const std::string& command, const std::string& config_path,
            std::optional<std::uint64_t> seed_override, const std::string& out_dir,
            unsigned threads) {
  try {
    RunConfig cfg = RunConfig::load(config_path);
    if (seed_override) cfg.cloud.seed = *seed_override;
    CommandContext ctx;
    ctx.config = std::move(cfg);
    ctx.out_dir = out_dir.empty() ? "." : out_dir;
    ctx.threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    fs::create_directories(ctx.out_dir);

    if (command == "coverage") return cmd_coverage(ctx);
    if (command == "metamodel") return cmd_metamodel(ctx);
    if (command == "plan") return cmd_plan(ctx);
    if (command == "synth") return cmd_synth(ctx);
    throw std::invalid_argument("unknown command \"" + command + "\"");
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what();
    if (e.row) {
      std::cerr << " (row " << e.row;
      if (e.col) std::cerr << ", column " << e.col;
      std::cerr << ")";
    }
    std::cerr << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace covplan
