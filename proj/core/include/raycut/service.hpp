#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "raycut/pipeline.hpp"
#include "raycut/volume.hpp"

namespace raycut {

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Session state and request handlers for the interactive seed loop. The
/// handlers are transport-independent; HttpServer binds them to routes.
///
///   GET  /api/volume
///   GET  /api/slice/{axis}/{index}?window=lo,hi          -> PNG
///   POST /api/segment                                    -> result summary
///   GET  /api/result/{id}/contour/{axis}/{index}         -> polylines
///   GET  /api/truth/contour/{axis}/{index}               -> polylines
///
/// The loaded volume and truth are never mutated; results are kept in
/// memory for the lifetime of the process only.
class SegmentationService {
 public:
  SegmentationService() = default;
  explicit SegmentationService(Volume volume, std::optional<MaskVolume> truth = std::nullopt);

  HttpResponse volume_info() const;
  HttpResponse slice(std::string_view axis, std::string_view index,
                     std::optional<std::string_view> window) const;
  HttpResponse segment(std::string_view body);
  HttpResponse result_contour(std::string_view id, std::string_view axis,
                              std::string_view index) const;
  HttpResponse truth_contour(std::string_view axis, std::string_view index) const;

  std::shared_ptr<const SegmentationResult> result(long long id) const;
  bool has_volume() const { return volume_.has_value(); }

 private:
  std::optional<Volume> volume_;
  std::optional<MaskVolume> truth_;
  mutable std::mutex mutex_;
  std::map<long long, std::shared_ptr<const SegmentationResult>> results_;
  std::atomic<long long> next_id_{1};
};

/// Thin HTTP front end over SegmentationService (CORS enabled).
class HttpServer {
 public:
  explicit HttpServer(SegmentationService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to host:port; port 0 picks a free port. Returns the bound port
  /// or -1 on failure.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace raycut
