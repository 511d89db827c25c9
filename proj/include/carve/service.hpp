#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "carve/renderer.hpp"
#include "carve/scene.hpp"

namespace carve {

struct HttpResponse {
  int status = 200;
  std::string content_type;
  std::string body;
};

/// A dataset registered at startup: <name>_intensity.nrrd,
/// <name>_labels.nrrd and <name>_colors.txt side by side under the root.
struct Dataset {
  std::string name;
  std::filesystem::path intensity_path, labels_path, colors_path;  // canonical
  std::shared_ptr<const VolumeData> data;
};

inline constexpr std::string_view kMultipartBoundary = "carve-frameset-7d1f0a";

/// Request handlers for the render service. Datasets are loaded once in the
/// constructor; handlers never mutate the service, so concurrent calls are
/// safe and identical requests yield identical bodies.
class RenderService {
 public:
  RenderService(std::filesystem::path dataset_root, unsigned render_threads = 0);

  const std::vector<Dataset>& datasets() const { return datasets_; }
  const std::filesystem::path& root() const { return root_; }

  /// POST /render. `buffer` selects a single part ("color", "depth", "seg");
  /// empty returns all three as multipart/form-data.
  HttpResponse handle_render(std::string_view body, std::string_view buffer = {}) const;
  /// POST /pick with {"scene": ..., "pixel": [x, y]}.
  HttpResponse handle_pick(std::string_view body) const;
  /// GET /datasets.
  HttpResponse handle_datasets() const;

  /// Dataset a scene refers to; throws NotFound for unknown or out-of-root paths.
  const Dataset& resolve(const Scene& scene) const;

 private:
  std::filesystem::path root_;
  unsigned threads_;
  std::vector<Dataset> datasets_;
};

/// Splits a multipart/form-data body into named parts.
std::map<std::string, std::string> parse_multipart(std::string_view body, std::string_view boundary);

/// Blocking HTTP front end. Returns when stop() is called from another thread.
class HttpServer {
 public:
  explicit HttpServer(const RenderService& service, std::filesystem::path static_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds (port 0 picks a free port) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace carve
