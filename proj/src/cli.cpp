#include "carve/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "carve/error.hpp"
#include "carve/image_io.hpp"
#include "carve/metrics.hpp"
#include "carve/nrrd.hpp"
#include "carve/phantom.hpp"
#include "carve/renderer.hpp"
#include "carve/service.hpp"

namespace carve {

namespace fs = std::filesystem;

namespace {

std::string text_of(const fs::path& path) {
  const auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

fs::path resolve_near(const fs::path& base_dir, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

VolumeData load_scene_data(const Scene& scene, const fs::path& scene_dir) {
  VolumeData data;
  data.intensity = load_intensity(resolve_near(scene_dir, scene.intensity_path));
  data.labels = load_labels(resolve_near(scene_dir, scene.labels_path));
  data.colors = parse_color_table(text_of(resolve_near(scene_dir, scene.color_table_path)));
  return data;
}

unsigned env_threads() {
  if (const char* v = std::getenv("CARVE_THREADS")) return static_cast<unsigned>(std::strtoul(v, nullptr, 10));
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Segment-aware volume carving: render, compare and rank views"};
  app.require_subcommand(1);
  unsigned threads = env_threads();
  app.add_option("--threads", threads, "Worker threads (0 = all cores; env CARVE_THREADS)");

  // phantom
  auto* phantom = app.add_subcommand("phantom", "Write the nested-shell test dataset and a default scene");
  std::string phantom_prefix;
  std::size_t phantom_size = 128;
  std::vector<double> phantom_spacing{1.0, 1.0, 1.0};
  phantom->add_option("--out", phantom_prefix, "Output prefix")->required();
  phantom->add_option("--size", phantom_size, "Voxels per axis")->check(CLI::PositiveNumber);
  phantom->add_option("--spacing", phantom_spacing, "Voxel spacing in mm (sx sy sz)")->expected(3);

  // render
  auto* render_cmd = app.add_subcommand("render", "Render a scene to PNG / PFM / PGM buffers");
  std::string scene_path, out_prefix;
  render_cmd->add_option("--scene", scene_path, "Scene document")->required();
  render_cmd->add_option("--out-prefix", out_prefix, "Output prefix")->required();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Compare two rendered views");
  std::string ref_seg, test_seg, ref_depth, test_depth;
  metrics->add_option("--ref", ref_seg, "Reference first-hit segment PGM")->required();
  metrics->add_option("--test", test_seg, "Test first-hit segment PGM")->required();
  metrics->add_option("--ref-depth", ref_depth, "Reference depth PFM");
  metrics->add_option("--test-depth", test_depth, "Test depth PFM");

  // pl-rank
  auto* plrank = app.add_subcommand("pl-rank", "Aggregate rankings with a Plackett-Luce fit");
  std::string rankings_path;
  PlackettLuceOptions pl_opts;
  plrank->add_option("rankings", rankings_path, "One ranking per line, comma-separated, best first")->required();
  plrank->add_option("--max-iter", pl_opts.max_iter);
  plrank->add_option("--tol", pl_opts.tol);
  plrank->add_option("--smoothing", pl_opts.smoothing);

  // regress
  auto* regress = app.add_subcommand("regress", "Least-squares fit of metric value against rank");
  std::string regress_path;
  regress->add_option("data", regress_path, "Lines of 'rank value' (whitespace or comma separated)")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Run the stateless render service");
  std::string listen = "127.0.0.1:8080";
  std::string dataset_root;
  std::string static_dir;
  if (const char* v = std::getenv("CARVE_LISTEN")) listen = v;
  if (const char* v = std::getenv("CARVE_DATASET_ROOT")) dataset_root = v;
  serve->add_option("--listen", listen, "host:port (env CARVE_LISTEN)");
  serve->add_option("--root", dataset_root, "Dataset root directory (env CARVE_DATASET_ROOT)");
  serve->add_option("--static", static_dir, "Directory of client files served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (*phantom) {
      PhantomSpec spec;
      spec.dims = {phantom_size, phantom_size, phantom_size};
      spec.spacing = {phantom_spacing[0], phantom_spacing[1], phantom_spacing[2]};
      const PhantomFiles files = write_phantom(spec, phantom_prefix);
      out << files.intensity.string() << '\n'
          << files.labels.string() << '\n'
          << files.colors.string() << '\n'
          << files.scene.string() << '\n';
    } else if (*render_cmd) {
      const Scene scene = parse_scene(text_of(scene_path));
      const VolumeData data = load_scene_data(scene, fs::path(scene_path).parent_path());
      const FrameSet frame = render(scene, data, threads);
      write_frameset(frame, out_prefix);
    } else if (*metrics) {
      if (ref_depth.empty() != test_depth.empty()) {
        err << "metrics: --ref-depth and --test-depth must be given together\n";
        return 1;
      }
      const SegImage a = decode_pgm16(read_file(ref_seg));
      const SegImage b = decode_pgm16(read_file(test_seg));
      if (a.width != b.width || a.height != b.height)
        throw Error(ErrorCode::DimsMismatch, "segment buffers differ in size");
      out << "mae_first_segment=" << shortest(mae_first_segment(a.values, b.values)) << '\n';
      if (!ref_depth.empty()) {
        const DepthImage da = decode_pfm(read_file(ref_depth));
        const DepthImage db = decode_pfm(read_file(test_depth));
        if (da.width != db.width || da.height != db.height)
          throw Error(ErrorCode::DimsMismatch, "depth buffers differ in size");
        out << "rmse_depth=" << shortest(rmse_depth(da.values, db.values)) << '\n';
      }
    } else if (*plrank) {
      const RankingData data = parse_rankings(text_of(rankings_path));
      const PlackettLuceFit fit = plackett_luce_fit(data, pl_opts);
      for (std::size_t item : global_rank(fit.worths))
        out << data.items[item] << ' ' << shortest(fit.worths[item]) << '\n';
    } else if (*regress) {
      std::istringstream in(text_of(regress_path));
      std::vector<double> ranks, values;
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double r, v;
        if (!(fields >> r)) continue;  // blank
        std::string extra;
        if (!(fields >> v) || (fields >> extra))
          throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'rank value'");
        ranks.push_back(r);
        values.push_back(v);
      }
      const Regression fit = rank_metric_regression(ranks, values);
      out << "slope=" << shortest(fit.slope) << "\nintercept=" << shortest(fit.intercept)
          << "\nr_squared=" << shortest(fit.r_squared) << '\n';
    } else if (*serve) {
      if (dataset_root.empty()) {
        err << "serve: --root is required\n";
        return 1;
      }
      const auto colon = listen.rfind(':');
      if (colon == std::string::npos) {
        err << "serve: --listen must be host:port\n";
        return 1;
      }
      const std::string host = listen.substr(0, colon);
      const int port = std::stoi(listen.substr(colon + 1));
      const RenderService service(dataset_root, threads);
      HttpServer server(service, static_dir);
      const int bound = server.bind(host, port);
      if (bound < 0) {
        err << "serve: cannot bind " << listen << '\n';
        return 2;
      }
      err << "serving " << service.datasets().size() << " dataset(s) from " << service.root().string() << " on "
          << host << ':' << bound << '\n';
      server.listen();
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace carve
