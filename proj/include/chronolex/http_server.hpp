#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "chronolex/temporal.hpp"

namespace chronolex {

struct ServeAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// Parses "host:port" (or ":port"). Throws Errc::InvalidArgument.
ServeAddress parse_address(std::string_view text);

inline constexpr const char* kAddressEnvVar = "CHRONOLEX_ADDR";

/// Read-only HTTP front end over a loaded index:
///   GET /api/v1/meta
///   GET /api/v1/projection?words=a,b&frames=true
///   GET /            static UI bundle (ui_dir) or a placeholder page
class ProjectionServer {
 public:
  explicit ProjectionServer(const TemporalIndex& index,
                            std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~ProjectionServer();
  ProjectionServer(const ProjectionServer&) = delete;
  ProjectionServer& operator=(const ProjectionServer&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the bound
  /// port. Throws Errc::BindFailure.
  int bind(const std::string& host, int port);

  /// Serves until stop() is called. Requires a prior bind().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Binds `address` and serves until the process is terminated.
void http_serve(const TemporalIndex& index, const ServeAddress& address,
                std::optional<std::filesystem::path> ui_dir = std::nullopt);

}  // namespace chronolex
