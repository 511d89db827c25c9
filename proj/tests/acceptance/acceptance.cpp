// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status is
// nonzero when any hard criterion fails; the performance line is advisory.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "carve/filters.hpp"
#include "carve/image_io.hpp"
#include "carve/metrics.hpp"
#include "carve/nrrd.hpp"
#include "carve/phantom.hpp"
#include "carve/renderer.hpp"
#include "carve/session.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace carve;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (failures_.size() < 3) failures_.push_back(what);
    }
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  Outcome outcome() const {
    std::string d = notes_;
    for (const auto& f : failures_) d += (d.empty() ? "" : "; ") + std::string("failed: ") + f;
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  std::vector<std::string> failures_;
  std::string notes_;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int prec = 3) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

struct PhantomData {
  PhantomSpec spec;
  VolumeData data;
  Scene scene;
};

const PhantomData& phantom128() {
  static const PhantomData pd = [] {
    PhantomData p;
    const Phantom ph = phantom_generate(p.spec);
    p.data = {ph.intensity, ph.labels, phantom_color_table(p.spec)};
    p.scene = phantom_scene(p.spec, "", "", "");
    return p;
  }();
  return pd;
}

oracle::SphereCut near_cap(const PhantomSpec& spec) {
  const double h = spec.half_extent();
  return {{0.0, 0.0, -2.3 * h}, 2.0 * h};
}

// ---------------------------------------------------------------------------

Outcome opacity_oracle() {
  Checker c;
  std::mt19937_64 rng(1001);
  const auto t0 = Clock::now();
  int exact = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto rc = oracle::random_case(rng, 8, 4);
    const auto want = oracle::brute_force_opacity(rc.intensity, rc.labels, rc.tf, rc.spheres, rc.pose);
    const auto got = compute_opacity_volume(rc.intensity, rc.labels, rc.tf, rc.spheres, rc.pose);
    exact += got.values == want.values;
  }
  const double secs = seconds_since(t0);
  c.require(exact == 100, std::to_string(100 - exact) + " cases differ");
  c.require(secs < 10.0, "runtime " + fmt(secs) + " s");
  c.note(std::to_string(exact) + "/100 bit-exact in " + fmt(secs) + " s");
  return c.outcome();
}

Outcome all_set_mask_equivalence() {
  Checker c;
  const auto& p = phantom128();
  const auto& vol = p.data.intensity;
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> pos(-60, 60), rad(5, 70);
  const Label universe = p.data.labels.max_label();
  int exact = 0;
  for (int rep = 0; rep < 5; ++rep) {
    const ClippingSphere s{{pos(rng), pos(rng), pos(rng)}, rad(rng), ClipMask(universe + 1u, true)};
    const auto got = compute_opacity_volume(vol, p.data.labels, p.scene.transfer, std::vector{s}, p.scene.pose);
    bool same = true;
    for (std::size_t k = 0; k < vol.dims.nz && same; ++k)
      for (std::size_t j = 0; j < vol.dims.ny && same; ++j)
        for (std::size_t i = 0; i < vol.dims.nx; ++i) {
          const Vec3 w = p.scene.pose.to_world(vol.voxel_position(i, j, k));
          const bool inside = length(w - s.center) < s.radius;
          const float want = inside ? 0.0f : p.scene.transfer(vol.at(i, j, k));
          if (got.at(i, j, k) != want) {
            same = false;
            break;
          }
        }
    exact += same;
  }
  c.require(exact == 5, std::to_string(5 - exact) + " spheres differ");
  c.note(std::to_string(exact) + "/5 spheres bit-exact on the 128^3 phantom");
  return c.outcome();
}

Outcome clipping_invariants() {
  Checker c;
  std::mt19937_64 rng(1003);
  int neutral = 0, monotone = 0, order = 0, dominance = 0;
  const int n = 200;
  for (int rep = 0; rep < n; ++rep) {
    const auto rc = oracle::random_case(rng, 8, 4);
    const auto run = [&](const std::vector<ClippingSphere>& s) {
      return compute_opacity_volume(rc.intensity, rc.labels, rc.tf, s, rc.pose).values;
    };
    const auto base = run(rc.spheres);
    const auto plain = run({});

    auto with_empty = rc.spheres;
    std::uniform_int_distribution<std::size_t> at(0, with_empty.size());
    with_empty.insert(with_empty.begin() + static_cast<long>(at(rng)),
                      ClippingSphere{rc.pose.to_world({0, 0, 0}), 100.0, ClipMask(rc.max_label + 1u)});
    neutral += run(with_empty) == base;

    auto wider = rc.spheres;
    for (auto& s : wider)
      for (Label l = 0; l <= rc.max_label; ++l)
        if (rng() % 3 == 0) s.mask.set(l);
    const auto more = run(wider);
    bool mono = true;
    for (std::size_t v = 0; v < more.size(); ++v) mono = mono && more[v] <= base[v];
    monotone += mono;

    auto perm = rc.spheres;
    std::shuffle(perm.begin(), perm.end(), rng);
    order += run(perm) == base;

    bool dom = true;
    for (std::size_t v = 0; v < base.size(); ++v) {
      const Label l = rc.labels.values[v];
      bool clippable_somewhere = false;
      for (const auto& s : rc.spheres) clippable_somewhere = clippable_somewhere || s.mask.test(l);
      if (!clippable_somewhere) dom = dom && base[v] == plain[v];
    }
    dominance += dom;
  }
  c.require(neutral == n, "empty-mask neutrality");
  c.require(monotone == n, "mask monotonicity");
  c.require(order == n, "order independence");
  c.require(dominance == n, "unclippable dominance");
  c.note("neutral " + std::to_string(neutral) + ", monotone " + std::to_string(monotone) + ", order " +
         std::to_string(order) + ", dominance " + std::to_string(dominance) + " of " + std::to_string(n));
  return c.outcome();
}

Outcome filter_oracles() {
  Checker c;
  std::mt19937_64 rng(1004);
  std::uniform_int_distribution<std::size_t> side(4, 8);
  int aa_exact = 0;
  double worst_normal = 0.0;
  const int n = 100;
  for (int rep = 0; rep < n; ++rep) {
    const Dims d{side(rng), side(rng), side(rng)};
    const OpacityVolume v = oracle::random_opacity(rng, d);
    aa_exact += antialias_opacity(v).values == oracle::naive_antialias(v, 0.125f).values;
    const NormalVolume nv = compute_normals(v);
    for (std::size_t k = 0; k < d.nz; ++k)
      for (std::size_t j = 0; j < d.ny; ++j)
        for (std::size_t i = 0; i < d.nx; ++i) {
          const Vec3 g = oracle::naive_sobel(v, long(i), long(j), long(k));
          const double len = length(g);
          const Vec3 want = len > 1e-6 ? -g / len : Vec3{};
          const Normal& got = nv.at(i, j, k);
          worst_normal = std::max({worst_normal, std::abs(got.x - want.x), std::abs(got.y - want.y),
                                   std::abs(got.z - want.z)});
        }
  }
  c.require(aa_exact == n, "anti-aliasing oracle");
  c.require(worst_normal <= 1e-6, "normal oracle max error " + fmt(worst_normal));

  // Analytic cases.
  const OpacityVolume flat({6, 6, 6}, {1, 1, 1}, {}, 0.7f);
  bool analytic = antialias_opacity(flat).values == flat.values;
  for (const Normal& x : compute_normals(flat).values) analytic = analytic && x == Normal{};
  OpacityVolume ramp({7, 5, 5}, {1, 1, 1}, {}, 0.0f);
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t i = 0; i < 7; ++i) ramp.at(i, j, k) = 0.1f * static_cast<float>(i);
  const NormalVolume rn = compute_normals(ramp);
  for (std::size_t i = 1; i < 6; ++i) analytic = analytic && rn.at(i, 2, 2) == Normal{-1.0f, 0.0f, 0.0f};
  OpacityVolume dot({5, 5, 5}, {1, 1, 1}, {}, 0.0f);
  dot.at(2, 2, 2) = 1.0f;
  const OpacityVolume ad = antialias_opacity(dot);
  analytic = analytic && ad.at(2, 2, 2) == 0.125f && ad.at(1, 2, 2) == 0.0625f && ad.at(2, 2, 3) == 0.0625f;
  c.require(analytic, "ramp / constant / single-voxel analytic cases");
  c.note("stage 2 exact " + std::to_string(aa_exact) + "/" + std::to_string(n) + ", stage 3 max err " +
         fmt(worst_normal) + ", analytic cases exact");
  return c.outcome();
}

Outcome renderer_properties() {
  Checker c;
  const auto& p = phantom128();
  Scene scene = p.scene;

  const FrameSet one = render(scene, p.data, 1);
  bool deterministic = true;
  for (unsigned t : {2u, 4u, 7u}) deterministic = deterministic && render(scene, p.data, t) == one;
  c.require(deterministic, "thread-count determinism");

  bool coupled = true;
  for (std::size_t i = 0; i < one.depth.size(); ++i)
    coupled = coupled && ((one.depth[i] == 1.0f) == (one.first_seg[i] == kMissLabel));

  Scene fine = scene;
  fine.render.step_size_voxels *= 0.5;
  const FrameSet half = render(fine, p.data);
  int worst = 0;
  for (std::size_t i = 0; i < one.color.size(); ++i)
    worst = std::max(worst, std::abs(int(one.color[i]) - int(half.color[i])));
  c.require(worst / 255.0 < 0.05, "step convergence " + fmt(worst / 255.0));

  const auto label_check = [&](const FrameSet& fs, std::optional<oracle::SphereCut> cut, std::size_t& compared) {
    std::size_t bad = 0;
    compared = 0;
    for (std::size_t py = 0; py < fs.height; ++py)
      for (std::size_t px = 0; px < fs.width; ++px) {
        const auto want = oracle::stable_phantom_label(p.spec, generate_ray(scene.camera, px, py), cut, 1.5);
        if (!want) continue;
        ++compared;
        bad += fs.first_seg[py * fs.width + px] != *want;
      }
    return bad;
  };
  std::size_t n_plain = 0, n_cut = 0;
  const std::size_t bad_plain = label_check(one, std::nullopt, n_plain);
  const std::size_t center = 128 * 256 + 128;
  const bool center_plain = one.first_seg[center] == 1;

  const auto cut = near_cap(p.spec);
  Scene carved = scene;
  carved.spheres.push_back({cut.center, cut.radius, ClipMask(p.data.labels.max_label() + 1u, true)});
  const FrameSet cf = render(carved, p.data);
  for (std::size_t i = 0; i < cf.depth.size(); ++i)
    coupled = coupled && ((cf.depth[i] == 1.0f) == (cf.first_seg[i] == kMissLabel));
  const std::size_t bad_cut = label_check(cf, cut, n_cut);
  const bool center_cut = cf.first_seg[center] == 2;

  c.require(coupled, "depth/seg sentinel coupling");
  c.require(bad_plain == 0 && center_plain, "uncut first-hit labels (" + std::to_string(bad_plain) + " wrong)");
  c.require(bad_cut == 0 && center_cut, "carved first-hit labels (" + std::to_string(bad_cut) + " wrong)");
  c.note("threads 1/2/4/7 identical; max step delta " + fmt(worst / 255.0) + "; analytic labels " +
         std::to_string(n_plain - bad_plain) + "/" + std::to_string(n_plain) + " uncut, " +
         std::to_string(n_cut - bad_cut) + "/" + std::to_string(n_cut) + " carved; center " +
         std::to_string(one.first_seg[center]) + " -> " + std::to_string(cf.first_seg[center]));
  return c.outcome();
}

Outcome session_properties() {
  Checker c;
  const auto& p = phantom128();
  Scene base = p.scene;
  const Label universe = p.data.labels.max_label();

  CarveSession s(universe, {10, -5, -40}, 30);
  s.toggle_label(3);
  s.fix_active_sphere();
  s.set_active_sphere({-15, 10, -30}, 25);
  s.toggle_label(2);
  const FrameSet before = render(s.snapshot(base), p.data);
  s.fix_active_sphere();
  s.set_active_sphere({0, 0, -20}, 18);
  const FrameSet during = render(s.snapshot(base), p.data);
  s.remove_last_sphere();
  const FrameSet after = render(s.snapshot(base), p.data);
  c.require(after == before, "fix/undo round trip");
  c.require(!(during == before), "intermediate state differs");

  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> coord(-80, 80), rad(0.0, 700.0);
  int immutable = 0;
  for (int seq = 0; seq < 1000; ++seq) {
    CarveSession t(universe, {0, 0, 0}, 40);
    bool ok = true;
    for (int step = 0; step < 50; ++step) {
      const auto prior = t.fixed_spheres();
      const int op = static_cast<int>(rng() % 5);
      if (op == 0) t.toggle_label(static_cast<Label>(rng() % (universe + 1u)));
      if (op == 1) t.reset_mask(rng() % 2 ? ResetTarget::AllClippable : ResetTarget::NoneClippable);
      if (op == 2) t.set_active_sphere({coord(rng), coord(rng), coord(rng)}, rad(rng));
      if (op == 3) t.fix_active_sphere();
      if (op == 4 && !prior.empty()) t.remove_last_sphere();
      const std::size_t kept = (op == 4 && !prior.empty()) ? prior.size() - 1 : prior.size();
      for (std::size_t i = 0; i < kept; ++i) ok = ok && t.fixed_spheres()[i] == prior[i];
    }
    immutable += ok;
  }
  c.require(immutable == 1000, "fixed-sphere immutability");

  const Scene snap = s.snapshot(base);
  const PreparedVolume pv = prepare_volume(p.data, snap.transfer, snap.spheres, snap.pose, snap.render);
  const FrameSet fs = render(snap.camera, pv, snap.render);
  int agree = 0, hits = 0;
  for (int n = 0; n < 100; ++n) {
    const std::size_t px = rng() % fs.width, py = rng() % fs.height;
    const PickResult r = pick_segment(generate_ray(snap.camera, px, py), pv, snap.render);
    agree += r.label.value_or(kMissLabel) == fs.first_seg[py * fs.width + px];
    hits += r.label.has_value();
  }
  c.require(agree == 100, "pick/render agreement " + std::to_string(agree) + "/100");
  c.note("undo byte-exact; immutability " + std::to_string(immutable) + "/1000; pick agreement " +
         std::to_string(agree) + "/100 (" + std::to_string(hits) + " hits)");
  return c.outcome();
}

Outcome metrics_properties() {
  Checker c;
  std::mt19937_64 rng(1007);

  bool buffers_ok = true;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng() % 500;
    std::vector<Label> a(n), b(n), z(n);
    std::vector<float> da(n), db(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<Label>(rng() % 4 == 0 ? kMissLabel : rng() % 5);
      b[i] = rng() % 2 ? a[i] : static_cast<Label>(rng() % 5);
      z[i] = static_cast<Label>(rng() % 5);
      da[i] = std::uniform_real_distribution<float>(0, 1)(rng);
      db[i] = rng() % 2 ? da[i] : std::uniform_real_distribution<float>(0, 1)(rng);
    }
    const double m = mae_first_segment(a, b), r = rmse_depth(da, db);
    buffers_ok = buffers_ok && mae_first_segment(a, a) == 0.0 && rmse_depth(da, da) == 0.0;
    buffers_ok = buffers_ok && m == mae_first_segment(b, a) && r == rmse_depth(db, da);
    buffers_ok = buffers_ok && m >= 0.0 && m <= 1.0 && r >= 0.0 && r <= 1.0;
    buffers_ok = buffers_ok && ((m == 0.0) == (a == b)) && ((r == 0.0) == (da == db));
    buffers_ok = buffers_ok && mae_first_segment(a, z) <= m + mae_first_segment(b, z) + 1e-12;
  }
  c.require(buffers_ok, "MAE/RMSE properties");

  int recovered = 0;
  bool monotone = true;
  const std::vector<std::size_t> truth{0, 1, 2, 3};
  for (int rep = 0; rep < 100; ++rep) {
    std::mt19937_64 r(50000 + rep);
    RankingData data;
    data.items = {"a", "b", "c", "d"};
    data.rankings = oracle::sample_rankings(r, {0.4, 0.3, 0.2, 0.1}, 200);
    const PlackettLuceFit fit = plackett_luce_fit(data);
    recovered += global_rank(fit.worths) == truth;
    for (std::size_t i = 1; i < fit.log_likelihood.size(); ++i)
      monotone = monotone &&
                 fit.log_likelihood[i] >= fit.log_likelihood[i - 1] - 1e-12 * std::abs(fit.log_likelihood[i - 1]);
  }
  c.require(recovered >= 95, "PL recovery " + std::to_string(recovered) + "/100");
  c.require(monotone, "PL objective decreased");

  std::mt19937_64 r3(1008);
  RankingData three;
  three.items = {"x", "y", "z"};
  three.rankings = oracle::sample_rankings(r3, {0.5, 0.3, 0.2}, 50);
  const auto grid = oracle::grid_search_3(three.rankings, 0.005);
  const auto fit3 = plackett_luce_fit(three);
  double grid_err = 0.0;
  for (int i = 0; i < 3; ++i) grid_err = std::max(grid_err, std::abs(fit3.worths[i] - grid[i]));
  c.require(grid_err <= 0.01, "grid oracle error " + fmt(grid_err));

  double reg_err = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng() % 20;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(i + 1);
      y[i] = std::uniform_real_distribution<double>(-1, 1)(rng) + 0.05 * x[i];
    }
    // Closed-form normal equations in extended precision.
    long double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sx += x[i];
      sy += y[i];
      sxx += (long double)x[i] * x[i];
      sxy += (long double)x[i] * y[i];
      syy += (long double)y[i] * y[i];
    }
    const long double N = n;
    const long double slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
    const long double icpt = (sy - slope * sx) / N;
    const long double r2 = (N * sxy - sx * sy) * (N * sxy - sx * sy) / ((N * sxx - sx * sx) * (N * syy - sy * sy));
    const Regression got = rank_metric_regression(x, y);
    reg_err = std::max({reg_err, double(std::abs(got.slope - slope)), double(std::abs(got.intercept - icpt)),
                        double(std::abs(got.r_squared - r2))});
  }
  c.require(reg_err <= 1e-9, "regression error " + fmt(reg_err));
  c.note("buffer properties hold over 200 pairs; PL recovery " + std::to_string(recovered) +
         "/100, objective nondecreasing; grid oracle err " + fmt(grid_err) + "; OLS err " + fmt(reg_err));
  return c.outcome();
}

// Minimal independent reader for the 16-bit PGM segment files.
std::vector<Label> read_pgm16_samples(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  std::size_t pos = 0;
  std::vector<std::string> tokens;
  while (tokens.size() < 4) {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    std::string tok;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) tok.push_back(static_cast<char>(bytes[pos++]));
    tokens.push_back(tok);
  }
  ++pos;
  const std::size_t count = std::stoul(tokens[1]) * std::stoul(tokens[2]);
  std::vector<Label> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = static_cast<Label>((bytes[pos + 2 * i] << 8) | bytes[pos + 2 * i + 1]);
  return out;
}

Outcome end_to_end_cli(const std::string& exe) {
  Checker c;
  const auto t0 = Clock::now();
  testing::TempDir dir("acceptance");
  const auto sh = [&](const std::string& cmd) {
    return std::system((cmd + " > " + (dir / "out.txt").string() + " 2>&1").c_str());
  };
  const auto output = [&] {
    const auto b = read_file(dir / "out.txt");
    return std::string(b.begin(), b.end());
  };
  const std::string prefix = (dir / "ph").string();
  c.require(sh(exe + " phantom --out " + prefix + " --size 128") == 0, "phantom");
  c.require(sh(exe + " render --scene " + prefix + "_scene.json --out-prefix " + (dir / "ref").string()) == 0,
            "reference render");

  const std::string scene_text = [&] {
    const auto b = read_file(prefix + "_scene.json");
    return std::string(b.begin(), b.end());
  }();
  Scene base = parse_scene(scene_text);
  // Each step clips shells 1 and 2 inside one more sphere at a new place.
  const std::vector<ClippingSphere> cuts = {
      {{-12, 8, -28}, 10, ClipMask::from_labels(std::vector<Label>{1, 2}, 5)},
      {{12, 8, -28}, 10, ClipMask::from_labels(std::vector<Label>{1, 2}, 5)},
      {{0, -12, -28}, 10, ClipMask::from_labels(std::vector<Label>{1, 2}, 5)},
  };
  std::vector<double> reported, expected;
  const auto ref = read_pgm16_samples(dir / "ref_seg.pgm");
  for (std::size_t k = 1; k <= cuts.size(); ++k) {
    Scene s = base;
    s.spheres.assign(cuts.begin(), cuts.begin() + static_cast<long>(k));
    const auto scene_path = dir / ("step" + std::to_string(k) + "_scene.json");
    write_file(scene_path, serialize_scene(s));
    const std::string out = (dir / ("step" + std::to_string(k))).string();
    c.require(sh(exe + " render --scene " + scene_path.string() + " --out-prefix " + out) == 0, "perturbed render");
    c.require(sh(exe + " metrics --ref " + (dir / "ref_seg.pgm").string() + " --test " + out + "_seg.pgm") == 0,
              "metrics");
    const std::string text = output();
    const auto eq = text.find("mae_first_segment=");
    c.require(eq != std::string::npos, "metrics output");
    reported.push_back(eq == std::string::npos ? -1.0 : std::stod(text.substr(eq + 18)));

    const auto test = read_pgm16_samples(out + "_seg.pgm");
    std::size_t diff = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) diff += ref[i] != test[i];
    expected.push_back(static_cast<double>(diff) / static_cast<double>(ref.size()));
  }
  c.require(reported == expected, "CLI MAE differs from the seg-buffer diff oracle");
  c.require(reported[0] > 0.0 && reported[0] < reported[1] && reported[1] < reported[2], "MAE not strictly increasing");
  const double secs = seconds_since(t0);
  c.note("MAE " + fmt(reported[0], 6) + " < " + fmt(reported[1], 6) + " < " + fmt(reported[2], 6) +
         " (oracle match) in " + fmt(secs) + " s");
  return c.outcome();
}

Outcome performance() {
  Checker c;
  const auto& p = phantom128();
  const auto time_render = [&](unsigned threads, FrameSet& out) {
    double best = 1e9;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = Clock::now();
      out = render(p.scene, p.data, threads);
      best = std::min(best, seconds_since(t0));
    }
    return best;
  };
  FrameSet f1, f4;
  const double t1 = time_render(1, f1);
  const double t4 = time_render(4, f4);
  const double speedup = t1 / t4;
  const unsigned cores = std::thread::hardware_concurrency();
  c.require(t4 < 2.0, "full pipeline " + fmt(t4) + " s");
  c.require(f1 == f4, "1 vs 4 threads not byte-identical");
  c.require(speedup >= 2.0, "speedup " + fmt(speedup) + "x on " + std::to_string(cores) + " hardware thread(s)");
  c.note("128^3 at 256x256: " + fmt(t1) + " s (1 thread), " + fmt(t4) + " s (4 threads), byte-identical");
  return c.outcome();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-carve-cli>\n";
    return 2;
  }
  const std::string exe = argv[1];
  struct Criterion {
    const char* name;
    bool hard;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"opacity volume equals brute-force clipping oracle (100 cases)", true, opacity_oracle},
      {"all-set mask equals label-agnostic sphere clipping on the phantom", true, all_set_mask_equivalence},
      {"clipping invariants: neutrality, monotonicity, order, dominance", true, clipping_invariants},
      {"filter stages match naive convolution oracles", true, filter_oracles},
      {"renderer: determinism, sentinels, step convergence, phantom labels", true, renderer_properties},
      {"session: undo round trip, fixed immutability, pick/render agreement", true, session_properties},
      {"metrics: buffer properties, Plackett-Luce recovery and oracle, OLS", true, metrics_properties},
      {"end-to-end CLI: MAE strictly increases along a perturbation sequence", true,
       [&] { return end_to_end_cli(exe); }},
      {"performance (soft): < 2 s and >= 2x speedup 1 -> 4 threads", false, performance},
  };

  const auto t0 = Clock::now();
  int hard_failures = 0;
  for (const auto& cr : criteria) {
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass && cr.hard) ++hard_failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << (cr.hard ? "  " : " (soft)  ") << cr.name << "  [" << o.detail << "]"
              << std::endl;
  }
  const double total = seconds_since(t0);
  std::cout << "suite runtime " << fmt(total) << " s (limit 300 s)" << std::endl;
  if (total >= 300.0) ++hard_failures;
  return hard_failures == 0 ? 0 : 1;
}
