#include <doctest.h>

#include <algorithm>
#include <random>

#include "carve/clip.hpp"
#include "carve/phantom.hpp"
#include "oracles.hpp"

using namespace carve;

TEST_CASE("transfer: interpolation and clamping") {
  const OpacityTransferFunction a({{0, 0}, {100, 1}});
  CHECK(eval_transfer(a, 50) == 0.5f);
  CHECK(eval_transfer(a, -10) == 0.0f);
  CHECK(eval_transfer(a, 1e6f) == 1.0f);
  CHECK(eval_transfer(a, 100) == 1.0f);
  const OpacityTransferFunction b({{0, 0}, {50, 0.2f}, {100, 1}});
  CHECK(eval_transfer(b, 75) == doctest::Approx(0.6));
  CHECK(eval_transfer(b, 50) == 0.2f);
}

TEST_CASE("transfer: invalid control points") {
  CHECK_THROWS_AS(OpacityTransferFunction({{0, 0}}), Error);
  CHECK_THROWS_AS(OpacityTransferFunction({{0, 0}, {0, 1}}), Error);
  CHECK_THROWS_AS(OpacityTransferFunction({{5, 0}, {1, 1}}), Error);
  CHECK_THROWS_AS(OpacityTransferFunction({{0, 0}, {1, 1.5f}}), Error);
  CHECK_THROWS_AS(OpacityTransferFunction({{0, -0.1f}, {1, 1}}), Error);
}

TEST_CASE("clip mask basics") {
  ClipMask m(5);
  CHECK(m.count() == 0);
  m.set(3);
  m.flip(0);
  CHECK(m.test(3));
  CHECK(m.test(0));
  CHECK_FALSE(m.test(4));
  CHECK_FALSE(m.test(200));  // beyond size: never clippable
  CHECK(m.set_labels() == std::vector<Label>{0, 3});
  m.flip(3);
  CHECK(m.count() == 1);
  ClipMask all(130, true);
  CHECK(all.count() == 130);
  CHECK(all.test(129));
  CHECK_FALSE(all.test(130));
  const Label l[] = {0, 3};
  ClipMask wide = ClipMask::from_labels(l, 70);
  wide.flip(3);
  wide.flip(3);
  m.flip(3);
  CHECK(wide == m);  // set-based equality ignores size
}

namespace {

LabelMap one_voxel_labels(Label l, Vec3 origin) {
  LabelMap m;
  static_cast<Grid<Label>&>(m) = Grid<Label>({1, 1, 1}, {1, 1, 1}, origin, l);
  return m;
}

ClippingSphere sphere(Vec3 c, double r, std::vector<Label> clip, std::size_t size = 8) {
  return {c, r, ClipMask::from_labels(clip, size)};
}

}  // namespace

TEST_CASE("is_clipped examples") {
  const Pose id;
  const auto near = one_voxel_labels(3, {1, 1, 1});
  const std::vector<ClippingSphere> s1 = {sphere({0, 0, 0}, 5, {3})};
  CHECK(is_clipped(0, 0, 0, near, s1, id));
  const auto far = one_voxel_labels(3, {10, 0, 0});
  CHECK_FALSE(is_clipped(0, 0, 0, far, s1, id));

  const std::vector<ClippingSphere> s2 = {sphere({0, 0, 0}, 5, {}), sphere({1, 0, 0}, 5, {3})};
  CHECK(is_clipped(0, 0, 0, near, s2, id));
  const std::vector<ClippingSphere> s3 = {sphere({0, 0, 0}, 5, {1, 2})};
  CHECK_FALSE(is_clipped(0, 0, 0, near, s3, id));

  // Strict boundary: distance exactly equal to the radius stays visible.
  const auto edge = one_voxel_labels(3, {5, 0, 0});
  CHECK_FALSE(is_clipped(0, 0, 0, edge, s1, id));

  // Pose is applied before the distance test.
  const Pose shifted{{-10, 0, 0}, {}, 1.0};
  CHECK(is_clipped(0, 0, 0, far, s1, shifted));
  const Pose scaled{{}, {}, 0.2};
  CHECK(is_clipped(0, 0, 0, far, s1, scaled));
}

TEST_CASE("opacity volume examples") {
  std::mt19937_64 rng(3);
  auto rc = oracle::random_case(rng, 6, 0);
  const OpacityVolume plain = compute_opacity_volume(rc.intensity, rc.labels, rc.tf, {}, rc.pose);
  for (std::size_t n = 0; n < plain.values.size(); ++n) CHECK(plain.values[n] == rc.tf(rc.intensity.values[n]));

  std::vector<ClippingSphere> all = {{rc.pose.to_world({0, 0, 0}), 1e4, ClipMask(rc.max_label + 1, true)}};
  const OpacityVolume none = compute_opacity_volume(rc.intensity, rc.labels, rc.tf, all, rc.pose);
  CHECK(std::all_of(none.values.begin(), none.values.end(), [](float v) { return v == 0.0f; }));

  LabelMap wrong = rc.labels;
  wrong.dims.nx += 1;
  try {
    compute_opacity_volume(rc.intensity, wrong, rc.tf, {}, rc.pose);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimsMismatch);
  }
}

TEST_CASE("opacity volume matches brute-force oracle and is thread-independent") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 100; ++rep) {
    const auto rc = oracle::random_case(rng);
    const OpacityVolume want = oracle::brute_force_opacity(rc.intensity, rc.labels, rc.tf, rc.spheres, rc.pose);
    for (unsigned t : {1u, 3u, 7u}) {
      const OpacityVolume got = compute_opacity_volume(rc.intensity, rc.labels, rc.tf, rc.spheres, rc.pose, t);
      REQUIRE(got.values == want.values);
    }
  }
}

TEST_CASE("opacity volume invariants") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 100; ++rep) {
    auto rc = oracle::random_case(rng);
    const auto base = compute_opacity_volume(rc.intensity, rc.labels, rc.tf, rc.spheres, rc.pose).values;
    const auto plain = compute_opacity_volume(rc.intensity, rc.labels, rc.tf, {}, rc.pose).values;

    // Empty-mask neutrality.
    auto with_empty = rc.spheres;
    with_empty.push_back({rc.pose.to_world({0, 0, 0}), 50.0, ClipMask(rc.max_label + 1)});
    CHECK(compute_opacity_volume(rc.intensity, rc.labels, rc.tf, with_empty, rc.pose).values == base);

    // Order independence.
    auto shuffled = rc.spheres;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(compute_opacity_volume(rc.intensity, rc.labels, rc.tf, shuffled, rc.pose).values == base);

    // Monotonicity: more clippable labels never raise opacity.
    auto wider = rc.spheres;
    for (auto& s : wider) s.mask.set(static_cast<Label>(rng() % (rc.max_label + 1)));
    const auto more = compute_opacity_volume(rc.intensity, rc.labels, rc.tf, wider, rc.pose).values;
    for (std::size_t n = 0; n < more.size(); ++n) CHECK(more[n] <= base[n]);

    // Unclippable dominance.
    for (std::size_t n = 0; n < base.size(); ++n) {
      const Label l = rc.labels.values[n];
      const bool protected_everywhere =
          std::none_of(rc.spheres.begin(), rc.spheres.end(), [&](const ClippingSphere& s) { return s.mask.test(l); });
      if (protected_everywhere) CHECK(base[n] == plain[n]);
    }
  }
}

TEST_CASE("all-set mask equals label-agnostic spherical clipping on the phantom") {
  PhantomSpec spec;
  spec.dims = {40, 40, 40};
  const Phantom ph = phantom_generate(spec);
  const Scene scene = phantom_scene(spec, "i", "l", "c");
  const Label universe = ph.labels.max_label();
  const std::vector<ClippingSphere> s = {{{4.0, -3.0, -8.0}, 13.5, ClipMask(universe + 1, true)}};
  const auto got = compute_opacity_volume(ph.intensity, ph.labels, scene.transfer, s, scene.pose);
  for (std::size_t k = 0; k < 40; ++k)
    for (std::size_t j = 0; j < 40; ++j)
      for (std::size_t i = 0; i < 40; ++i) {
        const Vec3 w = scene.pose.to_world(ph.intensity.voxel_position(i, j, k));
        const bool inside = length(w - s[0].center) < s[0].radius;
        const float want = inside ? 0.0f : scene.transfer(ph.intensity.at(i, j, k));
        REQUIRE(got.at(i, j, k) == want);
      }
}
