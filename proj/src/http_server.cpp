#include "chronolex/http_server.hpp"

#include <charconv>

#include "chronolex/error.hpp"
#include "chronolex/service.hpp"

// After Eigen: httplib pulls in <resolv.h>, whose _res macro breaks Eigen.
#include <httplib.h>

namespace chronolex {

ServeAddress parse_address(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos)
    throw Error(Errc::InvalidArgument, "address must be host:port, got '" + std::string(text) + "'");
  ServeAddress addr;
  std::string_view host = text.substr(0, colon);
  std::string_view port = text.substr(colon + 1);
  if (!host.empty()) addr.host = std::string(host);
  auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), addr.port);
  if (ec != std::errc() || ptr != port.data() + port.size() || addr.port < 0 || addr.port > 65535)
    throw Error(Errc::InvalidArgument, "invalid port '" + std::string(port) + "'");
  return addr;
}

namespace {

constexpr const char* kJson = "application/json";

constexpr const char* kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>chronolex</title></head>
<body>
<h1>chronolex</h1>
<p>The web UI bundle is not installed. Start the server with <code>--ui-dir</code>
pointing at the built frontend, or use the JSON API directly:</p>
<ul>
<li><a href="/api/v1/meta">/api/v1/meta</a></li>
<li><code>/api/v1/projection?words=a,b&amp;frames=true</code></li>
</ul>
</body></html>
)";

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& msg) {
  nlohmann::ordered_json body{{"error", code}, {"message", msg}};
  res.status = status;
  res.set_content(body.dump(), kJson);
}

int status_for(Errc code) {
  switch (code) {
    case Errc::AllPointsMissing: return 422;
    case Errc::EmptyQuery:
    case Errc::DuplicateWord:
    case Errc::InvalidQuery:
    case Errc::InvalidArgument: return 400;
    default: return 500;
  }
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1") {
    out = true;
    return true;
  }
  if (s == "false" || s == "0") {
    out = false;
    return true;
  }
  return false;
}

template <typename T>
bool parse_param(const std::string& s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

QueryRequest request_from_params(const httplib::Request& req) {
  if (!req.has_param("words"))
    throw Error(Errc::EmptyQuery, "missing required parameter 'words'");
  QueryRequest q;
  q.words = split_word_list(req.get_param_value("words"));
  if (req.has_param("frames") && !parse_bool(req.get_param_value("frames"), q.include_frames))
    throw Error(Errc::InvalidQuery, "parameter 'frames' must be true or false");
  if (req.has_param("normalize") && !parse_bool(req.get_param_value("normalize"), q.normalize))
    throw Error(Errc::InvalidQuery, "parameter 'normalize' must be true or false");
  if (req.has_param("width") || req.has_param("height")) {
    GridSize g;
    if (req.has_param("width") && !parse_param(req.get_param_value("width"), g.width))
      throw Error(Errc::InvalidQuery, "parameter 'width' must be an integer");
    if (req.has_param("height") && !parse_param(req.get_param_value("height"), g.height))
      throw Error(Errc::InvalidQuery, "parameter 'height' must be an integer");
    q.grid = g;
  }
  if (req.has_param("margin") && !parse_param(req.get_param_value("margin"), q.margin))
    throw Error(Errc::InvalidQuery, "parameter 'margin' must be a number");
  return q;
}

}  // namespace

struct ProjectionServer::Impl {
  const TemporalIndex& index;
  httplib::Server server;
  std::string meta_body;
  bool bound = false;

  explicit Impl(const TemporalIndex& idx) : index(idx), meta_body(index_meta(idx).dump()) {}
};

ProjectionServer::ProjectionServer(const TemporalIndex& index,
                                   std::optional<std::filesystem::path> ui_dir)
    : impl_(std::make_unique<Impl>(index)) {
  auto& srv = impl_->server;
  Impl* impl = impl_.get();

  // The library default sets SO_REUSEPORT, which lets a second server share a
  // busy port silently. Keep only SO_REUSEADDR so that case fails to bind.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });

  srv.Get("/api/v1/meta", [impl](const httplib::Request&, httplib::Response& res) {
    res.set_content(impl->meta_body, kJson);
  });

  srv.Get("/api/v1/projection", [impl](const httplib::Request& req, httplib::Response& res) {
    try {
      const QueryRequest q = request_from_params(req);
      res.set_content(to_json_body(run_query(impl->index, q)), kJson);
    } catch (const Error& e) {
      send_error(res, status_for(e.code()), errc_name(e.code()), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  });

  if (ui_dir) {
    if (!srv.set_mount_point("/", ui_dir->string()))
      throw Error(Errc::Io, "UI directory '" + ui_dir->string() + "' does not exist");
  } else {
    srv.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }

  srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty())
      send_error(res, 404, "NotFound", "no route for " + req.path);
  });
}

ProjectionServer::~ProjectionServer() { stop(); }

int ProjectionServer::bind(const std::string& host, int port) {
  int bound_port = port;
  if (port == 0) {
    bound_port = impl_->server.bind_to_any_port(host);
    if (bound_port < 0) bound_port = 0;
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound_port = 0;
  }
  if (bound_port <= 0)
    throw Error(Errc::BindFailure, "cannot bind " + host + ":" + std::to_string(port));
  impl_->bound = true;
  return bound_port;
}

void ProjectionServer::listen() {
  if (!impl_->bound) throw Error(Errc::BindFailure, "listen() called before bind()");
  impl_->server.listen_after_bind();
}

void ProjectionServer::stop() {
  if (impl_) impl_->server.stop();
}

void http_serve(const TemporalIndex& index, const ServeAddress& address,
                std::optional<std::filesystem::path> ui_dir) {
  ProjectionServer server(index, std::move(ui_dir));
  server.bind(address.host, address.port);
  server.listen();
}

}  // namespace chronolex
