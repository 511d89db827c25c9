#include "carve/service.hpp"

#include <httplib.h>

#include <algorithm>

#include "carve/color_table.hpp"
#include "carve/error.hpp"
#include "carve/image_io.hpp"
#include "carve/nrrd.hpp"
#include "carve/session.hpp"

namespace carve {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kIntensitySuffix = "_intensity.nrrd";

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string as_string(const Bytes& bytes) { return {bytes.begin(), bytes.end()}; }

HttpResponse json_response(int status, const json& doc) { return {status, "application/json", doc.dump() + "\n"}; }

HttpResponse error_response(int status, const std::string& message) {
  return json_response(status, {{"error", message}});
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::DimsMismatch: return 422;
    case ErrorCode::SchemaError:
    case ErrorCode::ValueError:
    case ErrorCode::ParseError:
    case ErrorCode::LabelOutOfRange: return 400;
    default: return 500;
  }
}

template <typename Fn>
HttpResponse guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return error_response(status_for(e.code()), e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("request is not JSON: ") + e.what());
  }
}

// A request is either a bare scene or {"scene": ..., "session": ...}. When a
// session is given, its spheres replace the scene's.
Scene scene_from_request(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "request must be a JSON object");
  const auto it = doc.find("scene");
  Scene scene = scene_from_json(it == doc.end() ? doc : *it);
  if (const auto s = doc.find("session"); s != doc.end()) {
    if (!s->is_object()) throw Error(ErrorCode::SchemaError, "session: expected an object");
    std::vector<ClippingSphere> spheres;
    if (const auto f = s->find("fixed_spheres"); f != s->end()) {
      if (!f->is_array()) throw Error(ErrorCode::SchemaError, "session.fixed_spheres: expected an array");
      for (std::size_t n = 0; n < f->size(); ++n)
        spheres.push_back(sphere_from_json((*f)[n], "session.fixed_spheres[" + std::to_string(n) + "]"));
    }
    const auto a = s->find("active_sphere");
    if (a == s->end()) throw Error(ErrorCode::SchemaError, "session.active_sphere: missing field");
    spheres.push_back(sphere_from_json(*a, "session.active_sphere"));
    scene.spheres = std::move(spheres);
  }
  return scene;
}

fs::path checked_path(const fs::path& root, const std::string& relative) {
  const fs::path full = fs::weakly_canonical(root / relative);
  const fs::path rel = full.lexically_relative(root);
  if (rel.empty() || *rel.begin() == "..")
    throw Error(ErrorCode::NotFound, "path outside the dataset root: " + relative);
  return full;
}

}  // namespace

RenderService::RenderService(fs::path dataset_root, unsigned render_threads) : threads_(render_threads) {
  std::error_code ec;
  root_ = fs::canonical(dataset_root, ec);
  if (ec || !fs::is_directory(root_))
    throw Error(ErrorCode::IoError, "dataset root is not a directory: " + dataset_root.string());

  std::vector<fs::path> candidates;
  for (const auto& entry : fs::recursive_directory_iterator(root_))
    if (entry.is_regular_file() && ends_with(entry.path().filename().string(), kIntensitySuffix))
      candidates.push_back(entry.path());
  std::sort(candidates.begin(), candidates.end());

  for (const auto& intensity : candidates) {
    const std::string file = intensity.filename().string();
    const std::string name = file.substr(0, file.size() - kIntensitySuffix.size());
    const fs::path labels = intensity.parent_path() / (name + "_labels.nrrd");
    const fs::path colors = intensity.parent_path() / (name + "_colors.txt");
    if (!fs::exists(labels) || !fs::exists(colors)) continue;

    auto data = std::make_shared<VolumeData>();
    data->intensity = load_intensity(intensity);
    data->labels = load_labels(labels);
    const auto text = read_file(colors);
    data->colors = parse_color_table(std::string_view(reinterpret_cast<const char*>(text.data()), text.size()));
    require_same_dims(data->intensity.dims, data->labels.dims, "dataset " + name + " volumes differ in size");
    require_covers(data->colors, data->labels);

    const std::string rel_dir = intensity.parent_path().lexically_relative(root_).generic_string();
    Dataset ds;
    ds.name = rel_dir == "." ? name : rel_dir + "/" + name;
    ds.intensity_path = intensity;
    ds.labels_path = fs::canonical(labels);
    ds.colors_path = fs::canonical(colors);
    ds.data = std::move(data);
    datasets_.push_back(std::move(ds));
  }
}

const Dataset& RenderService::resolve(const Scene& scene) const {
  const fs::path intensity = checked_path(root_, scene.intensity_path);
  const fs::path labels = checked_path(root_, scene.labels_path);
  const fs::path colors = checked_path(root_, scene.color_table_path);
  for (const auto& ds : datasets_)
    if (ds.intensity_path == intensity && ds.labels_path == labels && ds.colors_path == colors) return ds;
  throw Error(ErrorCode::NotFound, "no registered dataset for " + scene.intensity_path);
}

HttpResponse RenderService::handle_render(std::string_view body, std::string_view buffer) const {
  return guarded([&]() -> HttpResponse {
    if (!buffer.empty() && buffer != "color" && buffer != "depth" && buffer != "seg")
      return error_response(400, "unknown buffer '" + std::string(buffer) + "'");
    const Scene scene = scene_from_request(parse_body(body));
    const Dataset& ds = resolve(scene);
    const FrameSet frame = render(scene, *ds.data, threads_);

    const std::string png = as_string(encode_png(frame.width, frame.height, frame.color));
    if (buffer == "color") return {200, "image/png", png};
    const std::string pfm = as_string(encode_pfm(frame.width, frame.height, frame.depth));
    if (buffer == "depth") return {200, "application/x-pfm", pfm};
    const std::string pgm = as_string(encode_pgm16(frame.width, frame.height, frame.first_seg));
    if (buffer == "seg") return {200, "image/x-portable-graymap", pgm};

    const std::string boundary(kMultipartBoundary);
    std::string out;
    const auto part = [&](const char* name, const char* type, const std::string& data) {
      out += "--" + boundary + "\r\n";
      out += std::string("Content-Disposition: form-data; name=\"") + name + "\"; filename=\"" + name + "\"\r\n";
      out += std::string("Content-Type: ") + type + "\r\n\r\n";
      out += data;
      out += "\r\n";
    };
    part("color", "image/png", png);
    part("depth", "application/x-pfm", pfm);
    part("seg", "image/x-portable-graymap", pgm);
    out += "--" + boundary + "--\r\n";
    return {200, "multipart/form-data; boundary=" + boundary, std::move(out)};
  });
}

HttpResponse RenderService::handle_pick(std::string_view body) const {
  return guarded([&]() -> HttpResponse {
    const json doc = parse_body(body);
    const Scene scene = scene_from_request(doc);
    const auto px = doc.find("pixel");
    if (px == doc.end() || !px->is_array() || px->size() != 2 || !(*px)[0].is_number_integer() ||
        !(*px)[1].is_number_integer())
      throw Error(ErrorCode::SchemaError, "pixel: expected [x, y] integers");
    const long long x = (*px)[0].get<long long>(), y = (*px)[1].get<long long>();
    if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= scene.camera.width ||
        static_cast<std::size_t>(y) >= scene.camera.height)
      throw Error(ErrorCode::ValueError, "pixel outside the image");

    const Dataset& ds = resolve(scene);
    const PreparedVolume pv =
        prepare_volume(*ds.data, scene.transfer, scene.spheres, scene.pose, scene.render, threads_);
    const PickResult pick = pick_segment(
        generate_ray(scene.camera, static_cast<std::size_t>(x), static_cast<std::size_t>(y)), pv, scene.render);

    json out = {{"label", nullptr}, {"name", nullptr}, {"position", nullptr}, {"clippable", nullptr}};
    if (pick.label) {
      out["label"] = *pick.label;
      if (const auto* entry = ds.data->colors.find(*pick.label)) out["name"] = entry->name;
      out["position"] = json::array({pick.position->x, pick.position->y, pick.position->z});
      // The active sphere is the last one in the stack.
      if (!scene.spheres.empty()) out["clippable"] = scene.spheres.back().mask.test(*pick.label);
    }
    return json_response(200, out);
  });
}

HttpResponse RenderService::handle_datasets() const {
  json list = json::array();
  for (const auto& ds : datasets_) {
    json labels = json::array();
    for (const auto& [label, entry] : ds.data->colors.entries)
      labels.push_back({{"id", label},
                        {"name", entry.name},
                        {"color", json::array({entry.color.r, entry.color.g, entry.color.b})}});
    const auto& d = ds.data->intensity.dims;
    const auto rel = [&](const fs::path& p) { return p.lexically_relative(root_).generic_string(); };
    list.push_back({{"name", ds.name},
                    {"dims", json::array({d.nx, d.ny, d.nz})},
                    {"spacing", json::array({ds.data->intensity.spacing.x, ds.data->intensity.spacing.y,
                                             ds.data->intensity.spacing.z})},
                    {"origin", json::array({ds.data->intensity.origin.x, ds.data->intensity.origin.y,
                                            ds.data->intensity.origin.z})},
                    {"max_label", ds.data->labels.max_label()},
                    {"intensity", rel(ds.intensity_path)},
                    {"labels_path", rel(ds.labels_path)},
                    {"color_table", rel(ds.colors_path)},
                    {"labels", std::move(labels)}});
  }
  return json_response(200, {{"datasets", std::move(list)}});
}

std::map<std::string, std::string> parse_multipart(std::string_view body, std::string_view boundary) {
  std::map<std::string, std::string> parts;
  const std::string delim = "--" + std::string(boundary);
  std::size_t pos = body.find(delim);
  while (pos != std::string_view::npos) {
    pos += delim.size();
    if (body.substr(pos, 2) == "--") break;
    pos += 2;  // CRLF
    const std::size_t header_end = body.find("\r\n\r\n", pos);
    if (header_end == std::string_view::npos) break;
    const std::string_view headers = body.substr(pos, header_end - pos);
    const std::size_t data_begin = header_end + 4;
    const std::size_t next = body.find("\r\n" + delim, data_begin);
    if (next == std::string_view::npos) break;
    std::string name;
    if (const auto n = headers.find("name=\""); n != std::string_view::npos) {
      const auto end = headers.find('"', n + 6);
      name = std::string(headers.substr(n + 6, end - n - 6));
    }
    parts[name] = std::string(body.substr(data_begin, next - data_begin));
    pos = next + 2;
  }
  return parts;
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(const RenderService& service, fs::path static_dir) : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  const auto send = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body, r.content_type);
  };
  srv.Post("/render", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.handle_render(req.body, req.has_param("buffer") ? req.get_param_value("buffer") : ""));
  });
  srv.Post("/pick", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.handle_pick(req.body));
  });
  srv.Get("/datasets", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.handle_datasets());
  });
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  if (!static_dir.empty()) srv.set_mount_point("/", static_dir.string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace carve
