#include "raycut/service.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "httplib.h"
#include "json.hpp"
#include "raycut/contour.hpp"
#include "raycut/error.hpp"
#include "raycut/eval.hpp"
#include "raycut/png.hpp"

namespace raycut {

using nlohmann::json;

namespace {

HttpResponse json_response(int status, const json& body) {
  return {status, "application/json", body.dump()};
}

HttpResponse error_response(int status, const std::string& message) {
  return json_response(status, json{{"error", message}});
}

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

json contours_json(const std::vector<Polyline>& loops) {
  json out = json::array();
  for (const auto& loop : loops) {
    json pts = json::array();
    for (const auto& p : loop) pts.push_back({p.u, p.v});
    out.push_back(std::move(pts));
  }
  return out;
}

int status_for(Errc code) {
  switch (code) {
    case Errc::kSeedOutsideVolume: return 422;
    case Errc::kInvalidArgument:
    case Errc::kSubdivTooLarge: return 400;
    default: return 500;
  }
}

// Reads an optional numeric field; throws on a wrong type.
template <typename T>
void read_field(const json& body, const char* name, T& out) {
  if (!body.contains(name)) return;
  const json& v = body[name];
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) {
      throw Error(Errc::kInvalidArgument, std::string(name) + " must be an integer");
    }
  } else {
    if (!v.is_number()) {
      throw Error(Errc::kInvalidArgument, std::string(name) + " must be a number");
    }
  }
  out = v.get<T>();
}

}  // namespace

SegmentationService::SegmentationService(Volume volume, std::optional<MaskVolume> truth)
    : volume_(std::move(volume)), truth_(std::move(truth)) {
  if (truth_ && !truth_->geometry().matches(volume_->geometry())) {
    throw Error(Errc::kGeometryMismatch, "truth mask geometry differs from the volume");
  }
}

HttpResponse SegmentationService::volume_info() const {
  if (!volume_) return error_response(404, "no volume loaded");
  const Geometry& g = volume_->geometry();
  const auto [lo, hi] = volume_->intensity_range();
  return json_response(200, json{{"dims", {g.dims[0], g.dims[1], g.dims[2]}},
                                 {"spacing_mm", {g.spacing.x, g.spacing.y, g.spacing.z}},
                                 {"origin_mm", {g.origin.x, g.origin.y, g.origin.z}},
                                 {"intensity_range", {lo, hi}},
                                 {"has_truth", truth_.has_value()}});
}

HttpResponse SegmentationService::slice(std::string_view axis_name, std::string_view index_str,
                                        std::optional<std::string_view> window) const {
  if (!volume_) return error_response(404, "no volume loaded");
  const auto axis = parse_axis(axis_name);
  if (!axis) return error_response(400, "axis must be x, y or z");
  const auto index = parse_index(index_str);
  if (!index || *index >= volume_->dims()[static_cast<int>(*axis)]) {
    return error_response(400, "slice index out of range");
  }
  auto [lo, hi] = volume_->intensity_range();
  if (window) {
    const auto comma = window->find(',');
    if (comma == std::string_view::npos) return error_response(400, "window must be lo,hi");
    const auto wlo = parse_double(window->substr(0, comma));
    const auto whi = parse_double(window->substr(comma + 1));
    if (!wlo || !whi) return error_response(400, "window must be lo,hi");
    if (!(*whi > *wlo)) return error_response(400, "degenerate window");
    lo = *wlo;
    hi = *whi;
  } else if (!(hi > lo)) {
    hi = lo + 1.0;
  }

  const SliceShape shape = slice_shape(volume_->geometry(), *axis);
  const std::vector<double> values = extract_slice(*volume_, *axis, *index);
  GrayImage img{shape.width, shape.height, std::vector<std::uint8_t>(values.size())};
  const double scale = 255.0 / (hi - lo);
  std::transform(values.begin(), values.end(), img.pixels.begin(), [&](double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp((v - lo) * scale, 0.0, 255.0)));
  });
  return {200, "image/png", encode_png_gray8(img)};
}

HttpResponse SegmentationService::segment(std::string_view body_text) {
  if (!volume_) return error_response(404, "no volume loaded");
  json body;
  try {
    body = json::parse(body_text);
  } catch (const json::exception& e) {
    return error_response(400, std::string("malformed JSON: ") + e.what());
  }
  if (!body.is_object()) return error_response(400, "request body must be a JSON object");
  if (!body.contains("seed") || !body["seed"].is_array() || body["seed"].size() != 3) {
    return error_response(400, "seed must be an array of 3 voxel indices");
  }

  SegParams params;
  Seed seed;
  try {
    for (int a = 0; a < 3; ++a) {
      const json& c = body["seed"][a];
      if (!c.is_number()) throw Error(Errc::kInvalidArgument, "seed entries must be numbers");
      seed.value[a] = c.get<double>();
    }
    if (body.contains("seed_mm")) {
      if (!body["seed_mm"].is_boolean()) {
        throw Error(Errc::kInvalidArgument, "seed_mm must be a boolean");
      }
      seed.world_mm = body["seed_mm"].get<bool>();
    }
    read_field(body, "delta_r", params.delta_r);
    read_field(body, "subdiv", params.subdiv);
    read_field(body, "samples", params.samples);
    read_field(body, "radius_mm", params.max_radius_mm);
    read_field(body, "mean_window", params.mean_window);
    if (body.contains("cost_model")) {
      const auto m = body["cost_model"].is_string()
                         ? parse_cost_model(body["cost_model"].get<std::string>())
                         : std::nullopt;
      if (!m) throw Error(Errc::kInvalidArgument, "cost_model must be region or intensity");
      params.cost_model = *m;
    }
    if (body.contains("region_threshold")) {
      double tau = 0.0;
      read_field(body, "region_threshold", tau);
      params.region_threshold = tau;
    }
  } catch (const Error& e) {
    return error_response(400, e.what());
  }

  std::shared_ptr<SegmentationResult> res;
  try {
    res = std::make_shared<SegmentationResult>(run_segmentation(*volume_, seed, params));
  } catch (const Error& e) {
    return error_response(status_for(e.code()), e.what());
  }

  const long long id = next_id_.fetch_add(1);
  {
    std::lock_guard lock(mutex_);
    results_.emplace(id, res);
  }

  json out = {
      {"result_id", id},
      {"runtime_ms", res->timings.total_ms},
      {"phase_ms",
       {{"rays", res->timings.rays_ms},
        {"graph", res->timings.graph_ms},
        {"mincut", res->timings.mincut_ms},
        {"voxelize", res->timings.voxelize_ms}}},
      {"volume_mm3", res->volume_mm3()},
      {"boundary_stats", {{"min", res->boundary_min()}, {"max", res->boundary_max()}}},
      {"seed_voxel", {res->seed_voxel.i, res->seed_voxel.j, res->seed_voxel.k}},
  };
  if (truth_) out["dsc_pct"] = 100.0 * dice(res->mask, *truth_);
  return json_response(200, out);
}

std::shared_ptr<const SegmentationResult> SegmentationService::result(long long id) const {
  std::lock_guard lock(mutex_);
  auto it = results_.find(id);
  return it == results_.end() ? nullptr : it->second;
}

HttpResponse SegmentationService::result_contour(std::string_view id_str,
                                                 std::string_view axis_name,
                                                 std::string_view index_str) const {
  const auto id = parse_index(id_str);
  const auto res = id ? result(static_cast<long long>(*id)) : nullptr;
  if (!res) return error_response(404, "unknown result id");
  const auto axis = parse_axis(axis_name);
  if (!axis) return error_response(400, "axis must be x, y or z");
  const auto index = parse_index(index_str);
  if (!index || *index >= res->mask.dims()[static_cast<int>(*axis)]) {
    return error_response(400, "slice index out of range");
  }
  const SliceShape shape = slice_shape(res->mask.geometry(), *axis);
  return json_response(200, contours_json(trace_contours(
                                extract_slice(res->mask, *axis, *index), shape.width,
                                shape.height)));
}

HttpResponse SegmentationService::truth_contour(std::string_view axis_name,
                                                std::string_view index_str) const {
  if (!truth_) return error_response(404, "no truth mask loaded");
  const auto axis = parse_axis(axis_name);
  if (!axis) return error_response(400, "axis must be x, y or z");
  const auto index = parse_index(index_str);
  if (!index || *index >= truth_->dims()[static_cast<int>(*axis)]) {
    return error_response(400, "slice index out of range");
  }
  const SliceShape shape = slice_shape(truth_->geometry(), *axis);
  return json_response(200, contours_json(trace_contours(
                                extract_slice(*truth_, *axis, *index), shape.width,
                                shape.height)));
}

struct HttpServer::Impl {
  SegmentationService& service;
  httplib::Server server;

  explicit Impl(SegmentationService& s) : service(s) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    auto send = [](httplib::Response& res, const HttpResponse& r) {
      res.status = r.status;
      res.set_content(r.body, r.content_type.c_str());
    };
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
    server.Get("/api/volume", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, service.volume_info());
    });
    server.Get(R"(/api/slice/([^/]+)/([^/]+))",
               [this, send](const httplib::Request& req, httplib::Response& res) {
                 std::optional<std::string> window;
                 if (req.has_param("window")) window = req.get_param_value("window");
                 send(res, service.slice(req.matches[1].str(), req.matches[2].str(),
                                         window ? std::optional<std::string_view>(*window)
                                                : std::nullopt));
               });
    server.Post("/api/segment", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, service.segment(req.body));
    });
    server.Get(R"(/api/result/([^/]+)/contour/([^/]+)/([^/]+))",
               [this, send](const httplib::Request& req, httplib::Response& res) {
                 send(res, service.result_contour(req.matches[1].str(), req.matches[2].str(),
                                                  req.matches[3].str()));
               });
    server.Get(R"(/api/truth/contour/([^/]+)/([^/]+))",
               [this, send](const httplib::Request& req, httplib::Response& res) {
                 send(res, service.truth_contour(req.matches[1].str(), req.matches[2].str()));
               });
  }
};

HttpServer::HttpServer(SegmentationService& service)
    : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace raycut
