#include "raycut/contour.hpp"

#include <array>
#include <cstdint>
#include <unordered_map>

#include "raycut/error.hpp"

namespace raycut {

std::optional<Axis> parse_axis(std::string_view name) {
  if (name == "x") return Axis::kX;
  if (name == "y") return Axis::kY;
  if (name == "z") return Axis::kZ;
  return std::nullopt;
}

namespace {

std::array<int, 2> plane_axes(Axis axis) {
  switch (axis) {
    case Axis::kX: return {1, 2};
    case Axis::kY: return {0, 2};
    case Axis::kZ: return {0, 1};
  }
  return {0, 1};
}

template <typename T, typename Src>
std::vector<T> slice_of(const Src& src, Axis axis, std::size_t index) {
  const Geometry& g = src.geometry();
  const int n = static_cast<int>(axis);
  if (index >= g.dims[n]) throw Error(Errc::kInvalidArgument, "slice index out of range");
  const auto [a0, a1] = plane_axes(axis);
  const std::size_t w = g.dims[a0];
  const std::size_t h = g.dims[a1];
  std::vector<T> out(w * h);
  std::array<std::size_t, 3> ijk{};
  ijk[n] = index;
  for (std::size_t v = 0; v < h; ++v) {
    for (std::size_t u = 0; u < w; ++u) {
      ijk[a0] = u;
      ijk[a1] = v;
      out[v * w + u] = src.at(ijk[0], ijk[1], ijk[2]);
    }
  }
  return out;
}

}  // namespace

SliceShape slice_shape(const Geometry& g, Axis axis) {
  const auto [a0, a1] = plane_axes(axis);
  return {g.dims[a0], g.dims[a1]};
}

std::vector<double> extract_slice(const Volume& vol, Axis axis, std::size_t index) {
  return slice_of<double>(vol, axis, index);
}

std::vector<std::uint8_t> extract_slice(const MaskVolume& mask, Axis axis, std::size_t index) {
  return slice_of<std::uint8_t>(mask, axis, index);
}

std::vector<Polyline> trace_contours(const std::vector<std::uint8_t>& pixels,
                                     std::size_t width, std::size_t height) {
  if (pixels.size() != width * height) {
    throw Error(Errc::kInvalidArgument, "pixel buffer does not match slice shape");
  }
  const auto W = static_cast<std::int64_t>(width);
  const auto H = static_cast<std::int64_t>(height);
  auto fg = [&](std::int64_t u, std::int64_t v) -> bool {
    if (u < 0 || v < 0 || u >= W || v >= H) return false;
    return pixels[static_cast<std::size_t>(v * W + u)] != 0;
  };

  // Points are stored doubled so edge midpoints have integer keys.
  struct Seg {
    std::int64_t a[2];
    std::int64_t b[2];
  };
  std::vector<Seg> segs;
  for (std::int64_t v = -1; v < H; ++v) {
    for (std::int64_t u = -1; u < W; ++u) {
      const bool ca = fg(u, v), cb = fg(u + 1, v), cc = fg(u + 1, v + 1), cd = fg(u, v + 1);
      const std::int64_t top[2] = {2 * u + 1, 2 * v};
      const std::int64_t right[2] = {2 * u + 2, 2 * v + 1};
      const std::int64_t bottom[2] = {2 * u + 1, 2 * v + 2};
      const std::int64_t left[2] = {2 * u, 2 * v + 1};
      auto add = [&](const std::int64_t* p, const std::int64_t* q) {
        segs.push_back({{p[0], p[1]}, {q[0], q[1]}});
      };
      const bool t = ca != cb, r = cb != cc, bo = cd != cc, l = ca != cd;
      const int crossings = t + r + bo + l;
      if (crossings == 0) continue;
      if (crossings == 4) {
        if (ca) {
          add(top, left);
          add(right, bottom);
        } else {
          add(top, right);
          add(bottom, left);
        }
        continue;
      }
      const std::int64_t* ends[2];
      int k = 0;
      if (t) ends[k++] = top;
      if (r) ends[k++] = right;
      if (bo) ends[k++] = bottom;
      if (l) ends[k++] = left;
      add(ends[0], ends[1]);
    }
  }

  const std::int64_t stride = 2 * W + 4;
  auto key = [&](const std::int64_t* p) { return (p[1] + 2) * stride + (p[0] + 2); };
  std::unordered_map<std::int64_t, std::array<int, 2>> at;
  at.reserve(segs.size() * 2);
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    for (const std::int64_t* p : {segs[s].a, segs[s].b}) {
      auto [it, inserted] = at.try_emplace(key(p), std::array<int, 2>{s, -1});
      if (!inserted) it->second[1] = s;
    }
  }

  std::vector<Polyline> loops;
  std::vector<std::uint8_t> used(segs.size(), 0);
  for (std::size_t start = 0; start < segs.size(); ++start) {
    if (used[start]) continue;
    Polyline line;
    int s = static_cast<int>(start);
    const std::int64_t* p = segs[s].a;
    const std::int64_t first_key = key(p);
    while (true) {
      used[s] = 1;
      line.push_back({static_cast<double>(p[0]) / 2.0, static_cast<double>(p[1]) / 2.0});
      const std::int64_t* q = key(segs[s].a) == key(p) ? segs[s].b : segs[s].a;
      if (key(q) == first_key) break;
      const auto& pair = at.at(key(q));
      const int next = pair[0] == s ? pair[1] : pair[0];
      if (next < 0 || used[next]) break;
      s = next;
      p = q;
    }
    loops.push_back(std::move(line));
  }
  return loops;
}

}  // namespace raycut
