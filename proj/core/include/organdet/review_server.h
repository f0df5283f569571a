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
#ifndef ORGANDET_REVIEW_SERVER_H_
#define ORGANDET_REVIEW_SERVER_H_

#include <filesystem>
#include <memory>
#include <string>

#include "organdet/review_store.h"

namespace organdet {

struct ReviewServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // Image files are served from here by their manifest path.
  std::filesystem::path images_root;
};

// HTTP front end of a ReviewStore:
//
//   GET  /health
//   GET  /images?status=&category=&split=&page=&page_size=
//   GET  /images/{id}
//   GET  /images/{id}/file
//   POST /images/{id}/corrections
//   POST /images/{id}/approve
//   GET  /export?status=verified,corrected
//   GET  /stats
//
// Bodies are JSON documents carrying "version": 1. Errors answer
// {"error": message, "kind": ...} with 400, 404 or 409.
class ReviewServer {
 public:
  ReviewServer(ReviewStore& store, ReviewServerOptions options);
  ~ReviewServer();

  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Binds the listening socket and returns the bound port. Throws
  // std::runtime_error when the address is unavailable.
  int Bind();
  // Serves until Stop(). Binds first if needed.
  void Listen();
  // Safe to call from any thread.
  void Stop();
  bool is_running() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace organdet

#endif  // ORGANDET_REVIEW_SERVER_H_
