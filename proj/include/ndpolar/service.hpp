#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ndpolar/model.hpp"

namespace ndpolar {

/// A model and the revision it was installed as.
struct Snapshot {
    std::shared_ptr<const RiskModel> model;
    std::uint64_t revision = 0;
};

/// Single-model cell with snapshot-swap replacement. Readers keep whatever
/// snapshot they loaded; a replacement never mutates a published one.
class ModelStore {
public:
    explicit ModelStore(RiskModel model);

    Snapshot current() const;
    /// Installs the model and returns its revision.
    std::uint64_t replace(RiskModel model);

private:
    mutable std::mutex mutex_;
    Snapshot snapshot_;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::uint64_t revision = 0;
};

using QueryParams = std::vector<std::pair<std::string, std::string>>;

struct ServiceOptions {
    std::filesystem::path ui_dir;
};

/// JSON/SVG API over one model. Every response carries the revision it was
/// computed against (JSON field "revision" and header X-Model-Revision).
class Service {
public:
    explicit Service(RiskModel model, ServiceOptions options = {});
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Routes one request without a socket.
    HttpResponse handle(std::string_view method, std::string_view path, const QueryParams& query,
                        std::string_view body = {});

    ModelStore& store() noexcept { return store_; }

    /// Binds to `port` (0 picks a free one) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    bool listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Http;

    ModelStore store_;
    ServiceOptions options_;
    std::unique_ptr<Http> http_;
};

}  // namespace ndpolar
