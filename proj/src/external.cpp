// External backend protocol: one JSON request on stdin, one JSON response on
// stdout, per process invocation.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <utility>

#include "json.hpp"
#include "qzone/subsolvers.hpp"

namespace qzone {

using json = nlohmann::json;

namespace {

constexpr const char* kCommandEnv = "QZONE_EXTERNAL_SOLVER";

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  ~Fd() { reset(); }

  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

struct ProcessOutput {
  std::string stdout_text;
  int status = 0;
};

std::pair<Fd, Fd> make_pipe() {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    throw BackendSpawnError(std::string("pipe() failed: ") + std::strerror(errno));
  }
  return {Fd(fds[0]), Fd(fds[1])};
}

void kill_group(pid_t pid) {
  ::kill(-pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
}

ProcessOutput run_process(const std::string& command, const std::string& input,
                          std::chrono::milliseconds timeout) {
  auto [in_read, in_write] = make_pipe();
  auto [out_read, out_write] = make_pipe();

  const pid_t pid = ::fork();
  if (pid < 0) throw BackendSpawnError(std::string("fork() failed: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in_read.get(), STDIN_FILENO);
    ::dup2(out_write.get(), STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  in_read.reset();
  out_write.reset();
  ::fcntl(in_write.get(), F_SETFL, O_NONBLOCK);
  ::fcntl(out_read.get(), F_SETFL, O_NONBLOCK);

  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::size_t written = 0;
  if (input.empty()) in_write.reset();
  std::string output;
  char buffer[65536];
  while (out_read.get() >= 0) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      kill_group(pid);
      throw BackendTimeoutError("backend '" + command + "' did not finish within " +
                                std::to_string(timeout.count()) + " ms");
    }
    pollfd fds[2];
    nfds_t count = 0;
    fds[count++] = {out_read.get(), POLLIN, 0};
    if (in_write.get() >= 0) fds[count++] = {in_write.get(), POLLOUT, 0};
    const int ready = ::poll(fds, count, static_cast<int>(std::min<long long>(remaining.count(), 1000)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      kill_group(pid);
      throw BackendSpawnError(std::string("poll() failed: ") + std::strerror(errno));
    }
    if (count == 2 && fds[1].revents) {
      // A backend that exits without reading its input surfaces as EPIPE.
      const ssize_t n = ::write(in_write.get(), input.data() + written, input.size() - written);
      if (n > 0) written += static_cast<std::size_t>(n);
      if (n < 0 && errno != EAGAIN && errno != EINTR) written = input.size();
      if (written == input.size()) in_write.reset();
    }
    if (fds[0].revents) {
      const ssize_t n = ::read(out_read.get(), buffer, sizeof buffer);
      if (n > 0) {
        output.append(buffer, static_cast<std::size_t>(n));
      } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
        out_read.reset();
      }
    }
  }
  in_write.reset();

  // stdout closed; wait for exit under the same deadline.
  int status = 0;
  for (;;) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) throw BackendSpawnError("waitpid() failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      kill_group(pid);
      throw BackendTimeoutError("backend '" + command + "' did not exit within " +
                                std::to_string(timeout.count()) + " ms");
    }
    ::usleep(1000);
  }
  return {std::move(output), status};
}

struct IgnoreSigpipe {
  IgnoreSigpipe() {
    struct sigaction current {};
    if (::sigaction(SIGPIPE, nullptr, &current) == 0 && current.sa_handler == SIG_DFL) {
      ::signal(SIGPIPE, SIG_IGN);
    }
  }
};

}  // namespace

std::string external_request_json(const QuboModel& model) {
  json doc;
  doc["format_version"] = 1;
  doc["num_vars"] = model.num_vars();
  doc["linear"] = std::vector<double>(model.linear().begin(), model.linear().end());
  json quadratic = json::array();
  for (const auto& c : model.couplings()) quadratic.push_back(json::array({c.i, c.j, c.value}));
  doc["quadratic"] = std::move(quadratic);
  doc["constant"] = model.constant();
  return doc.dump() + "\n";
}

QuboModel model_from_request_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format_version").get<int>() != 1) throw ValidationError("unsupported format_version");
    const auto n = doc.at("num_vars").get<std::size_t>();
    const auto linear = doc.at("linear").get<std::vector<double>>();
    if (linear.size() != n) throw ValidationError("linear has the wrong length");
    QuboBuilder builder(n);
    for (Index i = 0; i < n; ++i) builder.add_linear(i, linear[i]);
    for (const auto& t : doc.at("quadratic")) {
      builder.add_quadratic(t.at(0).get<Index>(), t.at(1).get<Index>(), t.at(2).get<double>());
    }
    builder.add_constant(doc.at("constant").get<double>());
    return builder.build();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed request: ") + e.what());
  }
}

std::string external_response_json(const SolveResult& result) {
  json doc;
  doc["format_version"] = 1;
  doc["assignment"] = result.assignment;
  doc["energy"] = result.energy;
  return doc.dump() + "\n";
}

SolveResult solve_external(const QuboModel& model, const SubSolverConfig& config) {
  validate(config);
  static const IgnoreSigpipe ignore_sigpipe;
  std::string command = config.external_command;
  if (command.empty()) {
    if (const char* env = std::getenv(kCommandEnv)) command = env;
  }
  if (command.empty()) {
    throw BackendSpawnError(std::string("no external backend command configured (set ") +
                            kCommandEnv + " or pass one explicitly)");
  }

  const ProcessOutput out = run_process(command, external_request_json(model), config.external_timeout);
  if (WIFEXITED(out.status) && (WEXITSTATUS(out.status) == 126 || WEXITSTATUS(out.status) == 127)) {
    throw BackendSpawnError("backend '" + command + "' could not be started (exit " +
                            std::to_string(WEXITSTATUS(out.status)) + ")");
  }
  if (!WIFEXITED(out.status) || WEXITSTATUS(out.status) != 0) {
    throw BackendSpawnError("backend '" + command + "' terminated abnormally (status " +
                            std::to_string(out.status) + ")");
  }

  json doc;
  try {
    doc = json::parse(out.stdout_text);
  } catch (const json::parse_error& e) {
    throw BackendResponseError(std::string("backend response is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw BackendResponseError("backend response must be a JSON object");
  const auto version = doc.find("format_version");
  if (version == doc.end() || !version->is_number_integer() || version->get<int>() != 1) {
    throw BackendResponseError("backend response has a missing or unsupported format_version");
  }
  const auto bits = doc.find("assignment");
  if (bits == doc.end() || !bits->is_array()) {
    throw BackendResponseError("backend response lacks an assignment array");
  }
  if (const auto energy = doc.find("energy"); energy != doc.end() && !energy->is_number()) {
    throw BackendResponseError("backend response energy must be a number");
  }
  if (bits->size() != model.num_vars()) {
    throw BackendAssignmentLengthError("backend returned " + std::to_string(bits->size()) +
                                       " values for a " + std::to_string(model.num_vars()) +
                                       "-variable problem");
  }
  Assignment x;
  x.reserve(bits->size());
  for (const auto& b : *bits) {
    if (!b.is_number_integer() || (b.get<int>() != 0 && b.get<int>() != 1)) {
      throw BackendResponseError("backend assignment entries must be 0 or 1");
    }
    x.push_back(static_cast<std::uint8_t>(b.get<int>()));
  }
  // The reported energy is advisory; the local evaluation is authoritative.
  SolveResult result;
  result.energy = evaluate(model, x);
  result.assignment = std::move(x);
  result.evaluations = 1;
  return result;
}

}  // namespace qzone
