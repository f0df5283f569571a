// Copyright 2026 The organdet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "organdet/review_server.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <stdexcept>
#include <system_error>

#include <httplib.h>

#include "organdet/errors.h"
#include "organdet/manifest_io.h"
#include "review_json.h"

namespace organdet {
namespace {

using json_codec::json;

constexpr std::size_t kMaxPageSize = 1000;

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, int status, std::string_view kind,
                const std::string& message) {
  Reply(res, status,
        {{"version", 1}, {"error", message}, {"kind", std::string(kind)}});
}

std::size_t ParseCount(const std::string& text, const char* name) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument(std::string("invalid ") + name + " '" + text +
                                "'");
  }
  return value;
}

std::vector<std::string> SplitCommas(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    if (end > start) parts.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

std::string ContentType(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".png") return "image/png";
  if (ext == ".tif" || ext == ".tiff") return "image/tiff";
  if (ext == ".webp") return "image/webp";
  return "application/octet-stream";
}

}  // namespace

class ReviewServer::Impl {
 public:
  Impl(ReviewStore& store, ReviewServerOptions options)
      : store_(store), options_(std::move(options)) {
    Route();
  }

  int Bind() {
    if (port_ > 0) return port_;
    if (options_.port == 0) {
      port_ = server_.bind_to_any_port(options_.host);
    } else if (server_.bind_to_port(options_.host, options_.port)) {
      port_ = options_.port;
    }
    if (port_ <= 0) {
      throw std::runtime_error("cannot listen on " + options_.host + ":" +
                               std::to_string(options_.port));
    }
    return port_;
  }

  void Listen() {
    Bind();
    server_.listen_after_bind();
  }

  void Stop() { server_.stop(); }
  bool is_running() const { return server_.is_running(); }

 private:
  // Runs `handler`, mapping library exceptions onto HTTP errors.
  template <typename Handler>
  auto Guard(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const NotFoundError& e) {
        ReplyError(res, 404, "not_found", e.what());
      } catch (const ConflictError& e) {
        ReplyError(res, 409, "conflict", e.what());
      } catch (const ParseError& e) {
        ReplyError(res, 400, "bad_request", e.what());
      } catch (const std::invalid_argument& e) {
        ReplyError(res, 400, "bad_request", e.what());
      } catch (const std::exception& e) {
        ReplyError(res, 500, "internal", e.what());
      }
    };
  }

  json Parse(const httplib::Request& req) const {
    if (req.body.empty()) return json::object();
    return json_codec::Parse(req.body, "request body");
  }

  void Route() {
    server_.Get("/health", Guard([](const auto&, auto& res) {
      Reply(res, 200, {{"version", 1}, {"status", "ok"}});
    }));

    server_.Get("/images", Guard([this](const auto& req, auto& res) {
      ImageFilter filter;
      if (req.has_param("status") && !req.get_param_value("status").empty()) {
        const auto v = req.get_param_value("status");
        filter.status = ParseReviewStatus(v);
        if (!filter.status) throw std::invalid_argument("unknown status " + v);
      }
      if (req.has_param("split") && !req.get_param_value("split").empty()) {
        const auto v = req.get_param_value("split");
        filter.split = ParseSplit(v);
        if (!filter.split) throw std::invalid_argument("unknown split " + v);
      }
      if (req.has_param("category") &&
          !req.get_param_value("category").empty()) {
        const auto v = req.get_param_value("category");
        filter.category_id = store_.vocabulary().FindId(v);
        if (!filter.category_id) {
          throw std::invalid_argument("unknown category " + v);
        }
      }
      const std::size_t page =
          req.has_param("page") ? ParseCount(req.get_param_value("page"), "page")
                                : 0;
      std::size_t page_size = 50;
      if (req.has_param("page_size")) {
        page_size = ParseCount(req.get_param_value("page_size"), "page_size");
      }
      if (page_size == 0 || page_size > kMaxPageSize) {
        throw std::invalid_argument("page_size must lie in [1, 1000]");
      }
      const ImagePage result = store_.ListImages(filter, page, page_size);
      json items = json::array();
      for (const ImageSummary& s : result.items) {
        items.push_back(review_json::SummaryToJson(s, store_.vocabulary()));
      }
      Reply(res, 200,
            {{"version", 1},
             {"page", result.page},
             {"page_size", result.page_size},
             {"total", result.total},
             {"items", std::move(items)}});
    }));

    server_.Get(R"(/images/([^/]+))", Guard([this](const auto& req, auto& res) {
      Reply(res, 200,
            review_json::AnnotationsToJson(
                store_.GetAnnotations(req.matches[1].str()),
                store_.vocabulary()));
    }));

    server_.Get(R"(/images/([^/]+)/file)",
                Guard([this](const auto& req, auto& res) { ServeFile(req, res); }));

    server_.Post(R"(/images/([^/]+)/corrections)",
                 Guard([this](const auto& req, auto& res) {
      const std::string image_id = req.matches[1].str();
      CorrectionEvent event = review_json::EventFromJson(
          Parse(req), store_.vocabulary(), "request body", image_id);
      if (event.image_id != image_id) {
        throw std::invalid_argument("event image_id does not match the URL");
      }
      Reply(res, 200,
            review_json::AnnotationsToJson(store_.ApplyCorrection(event),
                                           store_.vocabulary()));
    }));

    server_.Post(R"(/images/([^/]+)/approve)",
                 Guard([this](const auto& req, auto& res) {
      const json body = Parse(req);
      CorrectionEvent event;
      event.image_id = req.matches[1].str();
      event.action = CorrectionAction::kApprove;
      if (body.contains("reviewer")) {
        event.reviewer = body["reviewer"].template get<std::string>();
      }
      if (body.contains("idempotency_key")) {
        event.idempotency_key =
            body["idempotency_key"].template get<std::string>();
      }
      Reply(res, 200,
            review_json::AnnotationsToJson(store_.ApplyCorrection(event),
                                           store_.vocabulary()));
    }));

    server_.Get("/export", Guard([this](const auto& req, auto& res) {
      std::set<ReviewStatus> statuses = {ReviewStatus::kVerified,
                                         ReviewStatus::kCorrected};
      if (req.has_param("status") && !req.get_param_value("status").empty()) {
        statuses.clear();
        for (const std::string& part :
             SplitCommas(req.get_param_value("status"))) {
          const auto status = ParseReviewStatus(part);
          if (!status) throw std::invalid_argument("unknown status " + part);
          statuses.insert(*status);
        }
      }
      res.status = 200;
      res.set_content(ManifestToJson(store_.ExportManifest(statuses)),
                      "application/json");
    }));

    server_.Get("/stats", Guard([this](const auto&, auto& res) {
      json body = json_codec::Parse(StatsToJson(store_.Stats()), "stats");
      body["status"] = review_json::StatusCountsToJson(store_.CountStatuses());
      body["events"] = store_.Log().size();
      Reply(res, 200, body);
    }));
  }

  void ServeFile(const httplib::Request& req, httplib::Response& res) {
    const ImageAnnotations annotations =
        store_.GetAnnotations(req.matches[1].str());
    if (options_.images_root.empty()) {
      throw NotFoundError("no images root configured");
    }
    std::error_code ec;
    const auto root =
        std::filesystem::weakly_canonical(options_.images_root, ec);
    const auto path = std::filesystem::weakly_canonical(
        options_.images_root / annotations.image.file_path, ec);
    const auto relative = path.lexically_relative(root);
    if (ec || relative.empty() || *relative.begin() == "..") {
      throw NotFoundError("image file outside the images root");
    }
    if (!std::filesystem::is_regular_file(path)) {
      throw NotFoundError("image file not found: " + path.string());
    }
    res.status = 200;
    res.set_content(ReadFileToString(path), ContentType(path).c_str());
  }

  ReviewStore& store_;
  ReviewServerOptions options_;
  httplib::Server server_;
  int port_ = 0;
};

ReviewServer::ReviewServer(ReviewStore& store, ReviewServerOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {}

ReviewServer::~ReviewServer() = default;

int ReviewServer::Bind() { return impl_->Bind(); }
void ReviewServer::Listen() { impl_->Listen(); }
void ReviewServer::Stop() { impl_->Stop(); }
bool ReviewServer::is_running() const { return impl_->is_running(); }

}  // namespace organdet
