// Copyright 2026 The hltruth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <set>
#include <thread>

#include "hltruth/error.hpp"
#include "hltruth/pipeline.hpp"
#include "json.hpp"

extern char** environ;

namespace hltruth {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

struct ChildOutput {
  int status = 0;
  std::string stdout_text;
};

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

// Runs argv with `input` on stdin and captures stdout; stderr is inherited.
ChildOutput run_child(const std::vector<std::string>& argv,
                      const std::string& input) {
  if (argv.empty()) throw DataError("external generator: empty command");
  int in_pipe[2] = {-1, -1};
  int out_pipe[2] = {-1, -1};
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0) {
    throw DataError(std::string("external generator: pipe: ") +
                    std::strerror(errno));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, in_pipe[1]);
  posix_spawn_file_actions_addclose(&actions, out_pipe[0]);

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = posix_spawnp(&pid, cargv[0], &actions, nullptr, cargv.data(),
                              environ);
  posix_spawn_file_actions_destroy(&actions);
  close_fd(in_pipe[0]);
  close_fd(out_pipe[1]);
  if (rc != 0) {
    close_fd(in_pipe[1]);
    close_fd(out_pipe[0]);
    throw DataError("external generator: cannot start '" + argv[0] +
                    "': " + std::strerror(rc));
  }

  std::thread writer([fd = in_pipe[1], &input]() mutable {
    // A child that exits without draining stdin must not kill us.
    sigset_t block;
    sigemptyset(&block);
    sigaddset(&block, SIGPIPE);
    pthread_sigmask(SIG_BLOCK, &block, nullptr);
    std::size_t off = 0;
    bool broken = false;
    while (off < input.size()) {
      const ssize_t w = ::write(fd, input.data() + off, input.size() - off);
      if (w < 0) {
        if (errno == EINTR) continue;
        broken = errno == EPIPE;
        break;
      }
      off += static_cast<std::size_t>(w);
    }
    ::close(fd);
    if (broken) {
      const timespec zero{0, 0};
      sigtimedwait(&block, nullptr, &zero);
    }
  });

  ChildOutput out;
  char buf[65536];
  for (;;) {
    const ssize_t r = ::read(out_pipe[0], buf, sizeof(buf));
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) break;
    out.stdout_text.append(buf, static_cast<std::size_t>(r));
  }
  close_fd(out_pipe[0]);
  writer.join();
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  out.status = status;
  return out;
}

std::string lead_tokens(std::string_view source, std::size_t k) {
  std::string out;
  std::size_t taken = 0;
  std::size_t pos = 0;
  while (taken < k) {
    const auto b = source.find_first_not_of(" \t\r\n", pos);
    if (b == std::string_view::npos) break;
    auto e = source.find_first_of(" \t\r\n", b);
    if (e == std::string_view::npos) e = source.size();
    if (!out.empty()) out += ' ';
    out.append(source.substr(b, e - b));
    ++taken;
    pos = e;
  }
  return out;
}

std::map<std::string, std::string> run_external(
    const ExternalCommand& cmd, const std::vector<const Instance*>& inputs) {
  std::string payload;
  for (const Instance* inst : inputs) {
    ordered_json j;
    j["id"] = inst->id;
    j["source"] = inst->source;
    payload += j.dump();
    payload += '\n';
  }
  const ChildOutput child = run_child(cmd.argv, payload);
  if (!WIFEXITED(child.status) || WEXITSTATUS(child.status) != 0) {
    const std::string how =
        WIFEXITED(child.status)
            ? "exit status " + std::to_string(WEXITSTATUS(child.status))
            : "signal " + std::to_string(WTERMSIG(child.status));
    throw DataError("external generator '" + cmd.argv[0] + "' failed with " +
                    how);
  }
  std::set<std::string> expected;
  for (const Instance* inst : inputs) expected.insert(inst->id);
  std::map<std::string, std::string> headlines;
  std::vector<GeneratedHeadline> rows;
  try {
    rows = parse_generated(child.stdout_text);
  } catch (const DataError& e) {
    throw DataError("external generator: malformed output: " +
                    std::string(e.what()));
  }
  for (auto& row : rows) {
    if (!expected.count(row.id)) {
      throw DataError("external generator returned unknown id '" + row.id +
                      "'");
    }
    if (!headlines.emplace(row.id, std::move(row.headline)).second) {
      throw DataError("external generator returned id '" + row.id +
                      "' twice");
    }
  }
  for (const auto& id : expected) {
    if (!headlines.count(id)) {
      throw DataError("external generator returned no headline for id '" +
                      id + "'");
    }
  }
  return headlines;
}

}  // namespace

std::string generator_id(const PseudoGenerator& generator) {
  if (const auto* lt = std::get_if<LeadTruncate>(&generator))
    return "lead_truncate:" + std::to_string(lt->k_tokens);
  const auto& ext = std::get<ExternalCommand>(generator);
  std::string id = "external:";
  for (std::size_t i = 0; i < ext.argv.size(); ++i) {
    if (i) id += ' ';
    id += ext.argv[i];
  }
  return id;
}

Dataset generate_pseudo(const Dataset& removed,
                        const PseudoGenerator& generator,
                        const PseudoOptions& options) {
  std::vector<const Instance*> eligible;
  for (const auto& inst : removed) {
    if (inst.origin == Origin::kPseudo) {
      throw DataError("pseudo generation input '" + inst.id +
                      "' is itself a pseudo pair");
    }
    if (inst.split == Split::kTrain ||
        (inst.split == Split::kDev && options.include_dev)) {
      eligible.push_back(&inst);
    }
  }
  if (eligible.empty()) return {};

  std::map<std::string, std::string> external;
  if (const auto* ext = std::get_if<ExternalCommand>(&generator)) {
    external = run_external(*ext, eligible);
  }
  const std::string gen_id = generator_id(generator);
  Dataset out;
  out.reserve(eligible.size());
  for (const Instance* inst : eligible) {
    Instance p;
    p.id = inst->id + std::string(kPseudoSuffix);
    p.source = inst->source;
    if (const auto* lt = std::get_if<LeadTruncate>(&generator)) {
      p.headline = lead_tokens(inst->source, lt->k_tokens);
    } else {
      p.headline = external.at(inst->id);
    }
    p.split = inst->split;
    p.origin = Origin::kPseudo;
    p.metadata[std::string(kGeneratorKey)] = gen_id;
    p.metadata[std::string(kSourceIdKey)] = inst->id;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace hltruth
