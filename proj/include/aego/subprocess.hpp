#pragma once

#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "core.hpp"

namespace aego {

class ProtocolError : public EvaluationError {
 public:
  explicit ProtocolError(const std::string& what) : EvaluationError("ProtocolError", what) {}
};

class Timeout : public EvaluationError {
 public:
  explicit Timeout(const std::string& what) : EvaluationError("Timeout", what) {}
};

class ChildExit : public EvaluationError {
 public:
  explicit ChildExit(const std::string& what) : EvaluationError("ChildExit", what) {}
};

/// How to launch an external objective.
///
/// The child reads one JSON object per line on stdin, {"id": <int>, "x": [..]},
/// and answers on stdout with {"id": <int>, "y": <number>}. Replies may arrive
/// in any order.
struct ExternalSpec {
  std::vector<std::string> argv;  // argv[0] is looked up on PATH
  std::size_t dim = 0;
  double timeout_seconds = 60.0;  // per evaluation, measured from its request
  std::size_t max_in_flight = 1;
};

/// One child process spoken to over a socket pair bound to its stdin and stdout.
/// Not thread-safe; each replicate owns its own.
class ExternalProcess {
 public:
  explicit ExternalProcess(ExternalSpec spec) : spec_(std::move(spec)) {
    if (spec_.argv.empty()) throw Error("external objective has an empty command");
    if (spec_.max_in_flight == 0) spec_.max_in_flight = 1;
  }
  ExternalProcess(const ExternalProcess&) = delete;
  ExternalProcess& operator=(const ExternalProcess&) = delete;
  ~ExternalProcess() { stop(); }

  const ExternalSpec& spec() const { return spec_; }
  bool running() const { return pid_ > 0; }
  pid_t pid() const { return pid_; }

  std::vector<double> evaluate(std::span<const Point> xs) {
    if (!running()) start();
    try {
      return exchange(xs);
    } catch (const EvaluationError&) {
      stop();
      throw;
    }
  }

  /// Closes the child's stdin, waits briefly, then kills it.
  void stop() {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
    if (pid_ > 0) {
      for (int i = 0; i < 50 && !reap(false); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
      if (pid_ > 0) {
        ::kill(pid_, SIGKILL);
        reap(true);
      }
    }
    buffer_.clear();
  }

 private:
  using Clock = std::chrono::steady_clock;

  void start() {
    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
      throw Error(std::string("socketpair failed: ") + std::strerror(errno));
    }
    std::vector<char*> args;
    for (auto& a : spec_.argv) args.push_back(a.data());
    args.push_back(nullptr);

    const pid_t pid = ::fork();
    if (pid < 0) {
      ::close(sv[0]);
      ::close(sv[1]);
      throw Error(std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid == 0) {
      ::dup2(sv[1], STDIN_FILENO);
      ::dup2(sv[1], STDOUT_FILENO);
      ::execvp(args[0], args.data());
      ::_exit(127);
    }
    ::close(sv[1]);
    fd_ = sv[0];
    pid_ = pid;
    exit_note_.clear();
  }

  // Returns true once the child has been reaped.
  bool reap(bool block) {
    int status = 0;
    const pid_t r = ::waitpid(pid_, &status, block ? 0 : WNOHANG);
    if (r == 0) return false;
    if (r == pid_) {
      if (WIFEXITED(status)) {
        exit_note_ = "exited with status " + std::to_string(WEXITSTATUS(status));
      } else if (WIFSIGNALED(status)) {
        exit_note_ = "killed by signal " + std::to_string(WTERMSIG(status));
      }
    }
    pid_ = -1;
    return true;
  }

  [[noreturn]] void child_gone() {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
    if (pid_ > 0) reap(true);
    throw ChildExit("external objective " + (exit_note_.empty() ? std::string("closed its output") : exit_note_));
  }

  void send_line(const std::string& line) {
    std::size_t off = 0;
    while (off < line.size()) {
      const ssize_t w = ::send(fd_, line.data() + off, line.size() - off, MSG_NOSIGNAL);
      if (w < 0) {
        if (errno == EINTR) continue;
        child_gone();
      }
      off += static_cast<std::size_t>(w);
    }
  }

  std::optional<std::string> take_line() {
    const auto nl = buffer_.find('\n');
    if (nl == std::string::npos) return std::nullopt;
    std::string line = buffer_.substr(0, nl);
    buffer_.erase(0, nl + 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  // Waits until a full line is buffered or the deadline passes.
  std::string read_line(Clock::time_point deadline) {
    for (;;) {
      if (auto line = take_line()) return *line;
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (left <= 0) throw Timeout("external objective gave no reply within " + std::to_string(spec_.timeout_seconds) + " s");
      pollfd p{fd_, POLLIN, 0};
      const int r = ::poll(&p, 1, static_cast<int>(std::min<long long>(left, 1 << 30)));
      if (r < 0) {
        if (errno == EINTR) continue;
        throw Error(std::string("poll failed: ") + std::strerror(errno));
      }
      if (r == 0) continue;
      char chunk[4096];
      const ssize_t n = ::read(fd_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        child_gone();
      }
      if (n == 0) child_gone();
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  std::pair<std::uint64_t, double> parse_reply(const std::string& line) const {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw ProtocolError("malformed reply line: " + line.substr(0, 200));
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_number_integer() || !j.contains("y") ||
        !j["y"].is_number()) {
      throw ProtocolError("reply needs integer 'id' and numeric 'y': " + line.substr(0, 200));
    }
    const double y = j["y"].get<double>();
    if (!std::isfinite(y)) throw ProtocolError("non-finite reply value");
    return {j["id"].get<std::uint64_t>(), y};
  }

  std::vector<double> exchange(std::span<const Point> xs) {
    const auto timeout = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(spec_.timeout_seconds));
    std::vector<double> ys(xs.size());
    std::map<std::uint64_t, std::pair<std::size_t, Clock::time_point>> pending;  // id -> (slot, deadline)
    std::size_t sent = 0, received = 0;
    while (received < xs.size()) {
      while (sent < xs.size() && pending.size() < spec_.max_in_flight) {
        const Point& x = xs[sent];
        if (spec_.dim != 0 && static_cast<std::size_t>(x.size()) != spec_.dim) {
          throw DimensionMismatch("external objective expects dimension " + std::to_string(spec_.dim));
        }
        const std::uint64_t id = next_id_++;
        nlohmann::json req = {{"id", id}, {"x", std::vector<double>(x.data(), x.data() + x.size())}};
        send_line(req.dump() + "\n");
        pending.emplace(id, std::make_pair(sent, Clock::now() + timeout));
        ++sent;
      }
      Clock::time_point deadline = Clock::time_point::max();
      for (const auto& [id, slot] : pending) deadline = std::min(deadline, slot.second);
      const auto [id, y] = parse_reply(read_line(deadline));
      const auto it = pending.find(id);
      if (it == pending.end()) throw ProtocolError("reply for unknown id " + std::to_string(id));
      ys[it->second.first] = y;
      pending.erase(it);
      ++received;
    }
    return ys;
  }

  ExternalSpec spec_;
  pid_t pid_ = -1;
  int fd_ = -1;
  std::string buffer_;
  std::string exit_note_;
  std::uint64_t next_id_ = 0;
};

/// Wraps an external child process as an Objective. The child starts on the
/// first evaluation and is restarted after a failure.
inline Objective external_objective(ExternalSpec spec) {
  auto proc = std::make_shared<ExternalProcess>(std::move(spec));
  return Objective([proc](const Point& x) { return proc->evaluate(std::span<const Point>(&x, 1)).front(); },
                   [proc](std::span<const Point> xs) { return proc->evaluate(xs); });
}

}  // namespace aego
