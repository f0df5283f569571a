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
#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <regex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "gtest/gtest.h"
#include "organdet/manifest_io.h"
#include "testing/crafted.h"
#include "testing/fixtures.h"

extern char** environ;

namespace organdet {
namespace {

using testing::ScratchDir;

// Starts the tool with stdout and stderr sent to files.
pid_t Spawn(std::vector<std::string> args, const std::filesystem::path& out,
            const std::filesystem::path& err) {
  args.insert(args.begin(), ORGANDET_CLI_BINARY);
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, out.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, err.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  pid_t pid = -1;
  const int rc = posix_spawn(&pid, ORGANDET_CLI_BINARY, &actions, nullptr,
                             argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  return rc == 0 ? pid : -1;
}

int Wait(pid_t pid) {
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) return -1;
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
}

class CliProcessTest : public ::testing::Test {
 protected:
  int Run(std::vector<std::string> args) {
    const pid_t pid = Spawn(std::move(args), dir_ / "out", dir_ / "err");
    EXPECT_GT(pid, 0);
    return pid > 0 ? Wait(pid) : -1;
  }
  std::string Err() const { return ReadFileToString(dir_ / "err"); }

  ScratchDir dir_;
};

TEST_F(CliProcessTest, ExitCodes) {
  EXPECT_EQ(Run({"--help"}), 0);
  EXPECT_EQ(Run({}), 2);
  EXPECT_EQ(Run({"stats", "--bogus"}), 2);
  EXPECT_EQ(Run({"stats", (dir_ / "missing.json").string()}), 1);
  EXPECT_NE(Err().find("missing.json"), std::string::npos);
}

TEST_F(CliProcessTest, ServeAnswersHealthAndStopsOnSignal) {
  const auto manifest = dir_ / "gt.json";
  WriteManifestFile(manifest, testing::CraftedGroundTruthManifest());
  const pid_t pid = Spawn({"serve", "--manifest", manifest.string(), "--port",
                           "0"},
                          dir_ / "out", dir_ / "err");
  ASSERT_GT(pid, 0);

  const std::regex listening(R"(on http://127\.0\.0\.1:(\d+))");
  std::smatch match;
  std::string err;
  for (int i = 0; i < 500; ++i) {
    err = ReadFileToString(dir_ / "err");
    if (std::regex_search(err, match, listening)) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ASSERT_FALSE(match.empty()) << err;
  const int port = std::stoi(match[1].str());

  httplib::Client client("127.0.0.1", port);
  httplib::Result res;
  for (int i = 0; i < 100 && !res; ++i) {
    res = client.Get("/health");
    if (!res) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  auto image = client.Get("/images/sheet");
  ASSERT_TRUE(image);
  EXPECT_EQ(image->status, 200);

  kill(pid, SIGTERM);
  EXPECT_EQ(Wait(pid), 0);
  EXPECT_NE(Err().find("stopped"), std::string::npos);
}

TEST_F(CliProcessTest, ServeMissingManifestFails) {
  EXPECT_EQ(Run({"serve", "--manifest", (dir_ / "none.json").string(),
                 "--port", "0"}),
            1);
  EXPECT_NE(Err().find("none.json"), std::string::npos);
}

}  // namespace
}  // namespace organdet
