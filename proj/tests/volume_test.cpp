#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "raycut/error.hpp"
#include "raycut/nrrd.hpp"
#include "raycut/volume.hpp"
#include "test_util.hpp"

using namespace raycut;
using raycut::testing::TempDir;

namespace {

std::string header(const std::string& body) { return "NRRD0004\n" + body + "\n"; }

std::string small_uchar(std::size_t payload_bytes) {
  std::string bytes = header(
      "dimension: 3\nsizes: 2 2 2\ntype: uchar\nencoding: raw\nspacings: 1 1 1\n");
  for (std::size_t i = 0; i < payload_bytes; ++i) bytes.push_back(static_cast<char>(i));
  return bytes;
}

Errc error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected raycut::Error";
  return Errc::kInvalidArgument;
}

}  // namespace

TEST(Nrrd, DecodesRawUchar) {
  const Volume v = decode_nrrd(small_uchar(8));
  EXPECT_EQ(v.dims(), (std::array<std::size_t, 3>{2, 2, 2}));
  ASSERT_EQ(v.data().size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(v.data()[i], double(i));
  EXPECT_EQ(v.scalar_kind(), ScalarKind::kUInt8);
  EXPECT_EQ(v.at(1, 0, 0), 1.0);
  EXPECT_EQ(v.at(0, 1, 0), 2.0);
  EXPECT_EQ(v.at(0, 0, 1), 4.0);
}

TEST(Nrrd, ShortPayloadIsSizeMismatch) {
  EXPECT_EQ(error_code([] { decode_nrrd(small_uchar(7)); }), Errc::kSizeMismatch);
}

TEST(Nrrd, HeaderErrors) {
  EXPECT_EQ(error_code([] {
              decode_nrrd(header("dimension: 4\nsizes: 1 1 1 1\ntype: uchar\nencoding: raw\n"));
            }),
            Errc::kUnsupportedDimension);
  EXPECT_EQ(error_code([] { decode_nrrd("P5\n1 1\n"); }), Errc::kMalformedHeader);
  EXPECT_EQ(error_code([] {
              decode_nrrd(header(
                  "dimension: 3\nsizes: 1 1 1\ntype: uchar\nencoding: bzip2\nspacings: 1 1 1\n"));
            }),
            Errc::kUnsupportedEncoding);
  EXPECT_EQ(error_code([] {
              decode_nrrd(header(
                  "dimension: 3\nsizes: 1 1 1\ntype: complex\nencoding: raw\nspacings: 1 1 1\n"));
            }),
            Errc::kUnsupportedType);
  EXPECT_EQ(error_code([] {
              decode_nrrd(header("dimension: 3\nsizes: 1 1 1\ntype: uchar\nencoding: raw\n"
                                 "space: left-posterior-superior\n"
                                 "space directions: (0.7,0.7,0) (-0.7,0.7,0) (0,0,1)\n") +
                          std::string(1, '\0'));
            }),
            Errc::kNonAxisAlignedDirections);
  EXPECT_EQ(error_code([] {
              decode_nrrd(header("dimension: 3\nsizes: 1 1 1\ntype: uchar\nencoding: raw\n"
                                 "spacings: 1 1 1\ndata file: other.raw\n"));
            }),
            Errc::kMalformedHeader);
}

TEST(Nrrd, SpaceDirectionsGiveSpacingAndOrigin) {
  std::string bytes = header(
      "type: short\ndimension: 3\nspace: left-posterior-superior\nsizes: 2 1 1\n"
      "space directions: (0.5,0,0) (0,-0.75,0) (0,0,3)\nendian: big\nencoding: raw\n"
      "space origin: (-10,20.5,3)\n");
  bytes += std::string("\x01\x02\xff\xfe", 4);
  const Volume v = decode_nrrd(bytes);
  EXPECT_EQ(v.spacing(), (Vec3{0.5, 0.75, 3.0}));
  EXPECT_EQ(v.origin(), (Vec3{-10.0, 20.5, 3.0}));
  EXPECT_EQ(v.scalar_kind(), ScalarKind::kInt16);
  EXPECT_EQ(v.data()[0], 258.0);
  EXPECT_EQ(v.data()[1], -2.0);
}

TEST(Nrrd, VolumeRoundTripRawAndGzip) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(0.0, 100.0);
  Geometry g;
  g.dims = {5, 4, 3};
  g.spacing = {0.3125, 0.3125, 3.0};
  g.origin = {-40.1, 17.25, 1e-3};
  std::vector<double> data(g.voxel_count());
  for (auto& x : data) x = d(rng);
  const Volume v(g, data);
  for (auto enc : {NrrdEncoding::kRaw, NrrdEncoding::kGzip}) {
    const Volume back = decode_nrrd(encode_nrrd(v, enc));
    EXPECT_EQ(back.data(), v.data());
    EXPECT_EQ(back.spacing(), v.spacing());
    EXPECT_EQ(back.origin(), v.origin());
    EXPECT_EQ(back.dims(), v.dims());
  }
}

TEST(Nrrd, TruncatedGzipIsSizeMismatch) {
  Geometry g;
  g.dims = {8, 8, 8};
  const Volume v(g, std::vector<double>(g.voxel_count(), 7.0));
  std::string bytes = encode_nrrd(v, NrrdEncoding::kGzip);
  bytes.resize(bytes.size() - 6);
  EXPECT_EQ(error_code([&] { decode_nrrd(bytes); }), Errc::kSizeMismatch);
}

TEST(Nrrd, MaskRoundTripIsBitIdentical) {
  TempDir dir("nrrd");
  std::mt19937_64 rng(11);
  Geometry g;
  g.dims = {7, 3, 5};
  g.spacing = {0.5, 0.5, 2.0};
  g.origin = {1.0, -2.0, 3.5};
  MaskVolume m(g);
  std::bernoulli_distribution coin(0.4);
  for (auto& x : m.data()) x = coin(rng) ? 1 : 0;
  for (auto enc : {NrrdEncoding::kRaw, NrrdEncoding::kGzip}) {
    const auto path = dir / "m.nrrd";
    write_nrrd_mask(m, path, enc);
    const MaskVolume back = read_nrrd_mask(path);
    EXPECT_EQ(back.data(), m.data());
    EXPECT_TRUE(back.geometry().matches(g));
  }
}

TEST(Nrrd, SingleVoxelMaskPayloadIsOneByte) {
  Geometry g;
  MaskVolume m(g, {1});
  const std::string raw = encode_nrrd_mask(m, NrrdEncoding::kRaw);
  const auto sep = raw.find("\n\n");
  ASSERT_NE(sep, std::string::npos);
  EXPECT_EQ(raw.substr(sep + 2), std::string(1, '\x01'));
  // The default (gzip) encoding decompresses to the same single byte.
  const Volume v = decode_nrrd(encode_nrrd_mask(m));
  ASSERT_EQ(v.data().size(), 1u);
  EXPECT_EQ(v.data()[0], 1.0);
}

TEST(Nrrd, IoErrors) {
  Geometry g;
  MaskVolume m(g, {1});
  EXPECT_EQ(error_code([&] { write_nrrd_mask(m, "/nonexistent-dir/x/y.nrrd"); }), Errc::kIo);
  EXPECT_EQ(error_code([&] { write_nrrd_mask(m, ""); }), Errc::kIo);
  EXPECT_EQ(error_code([] { read_nrrd("/nonexistent-dir/in.nrrd"); }), Errc::kIo);
}

TEST(Geometry, WorldIndexMapping) {
  Geometry g;
  g.dims = {4, 4, 4};
  g.spacing = {2, 2, 2};
  EXPECT_EQ(index_to_world(g, Index3{1, 1, 1}), (Vec3{2, 2, 2}));
  g.origin = {-5, 0, 0};
  g.spacing = {1, 1, 1};
  EXPECT_EQ(world_to_index(g, {-5, 0, 0}), (Vec3{0, 0, 0}));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50, 50);
  g.spacing = {0.3, 1.7, 2.5};
  g.origin = {u(rng), u(rng), u(rng)};
  for (int t = 0; t < 100; ++t) {
    const Vec3 v{u(rng), u(rng), u(rng)};
    const Vec3 back = world_to_index(g, index_to_world(g, v));
    EXPECT_NEAR(back.x, v.x, 1e-9);
    EXPECT_NEAR(back.y, v.y, 1e-9);
    EXPECT_NEAR(back.z, v.z, 1e-9);
  }
}

TEST(Geometry, VoxelVolume) {
  Geometry g;
  EXPECT_DOUBLE_EQ(voxel_volume_mm3(g), 1.0);
  g.spacing = {0.5, 0.5, 3.0};
  EXPECT_DOUBLE_EQ(voxel_volume_mm3(g), 0.75);
}

TEST(Geometry, InsideBoundsUsesCellExtents) {
  Geometry g;
  g.dims = {3, 3, 3};
  EXPECT_TRUE(inside_bounds(g, {-0.49, 0, 2.49}));
  EXPECT_FALSE(inside_bounds(g, {-0.5, 1, 1}));
  EXPECT_FALSE(inside_bounds(g, {1, 1, 2.5}));
}

TEST(Volume, RejectsBadData) {
  Geometry g;
  g.dims = {2, 1, 1};
  EXPECT_EQ(error_code([&] { Volume(g, {1.0}); }), Errc::kSizeMismatch);
  EXPECT_EQ(error_code([&] { Volume(g, {1.0, std::nan("")}); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_code([&] { MaskVolume(g, {0, 2}); }), Errc::kInvalidArgument);
}

TEST(Trilinear, ExactAtVoxelCentres) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 255);
  Geometry g;
  g.dims = {4, 5, 6};
  g.spacing = {0.7, 1.1, 2.0};
  g.origin = {3, -4, 5};
  std::vector<double> data(g.voxel_count());
  for (auto& x : data) x = u(rng);
  const Volume v(g, data);
  for (std::int64_t k = 0; k < 6; ++k) {
    for (std::int64_t j = 0; j < 5; ++j) {
      for (std::int64_t i = 0; i < 4; ++i) {
        EXPECT_DOUBLE_EQ(sample_trilinear(v, index_to_world(g, Index3{i, j, k})),
                         v.at(i, j, k));
      }
    }
  }
}

TEST(Trilinear, MidpointAndClamp) {
  Geometry g;
  g.dims = {2, 1, 1};
  const Volume v(g, {10.0, 20.0});
  EXPECT_DOUBLE_EQ(sample_trilinear(v, {0.5, 0, 0}), 15.0);
  EXPECT_DOUBLE_EQ(sample_trilinear(v, {-100, 40, -3}), 10.0);
  EXPECT_DOUBLE_EQ(sample_trilinear(v, {100, 0, 0}), 20.0);
}

TEST(Trilinear, ReproducesAffineFields) {
  // Trilinear interpolation is exact for functions linear in each coordinate.
  Geometry g;
  g.dims = {6, 6, 6};
  g.spacing = {1.5, 0.5, 1.0};
  std::vector<double> data(g.voxel_count());
  auto f = [](const Vec3& p) { return 3.0 + 2.0 * p.x - p.y + 0.25 * p.z; };
  for (std::size_t k = 0; k < 6; ++k)
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t i = 0; i < 6; ++i)
        data[g.linear_index(i, j, k)] = f(index_to_world(g, Vec3{double(i), double(j), double(k)}));
  const Volume v(g, data);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const Vec3 p{u(rng) * 7.5, u(rng) * 2.5, u(rng) * 5.0};
    EXPECT_NEAR(sample_trilinear(v, p), f(p), 1e-9);
  }
}
