#include "bridge/util/subprocess.hpp"
#include "bridge/util/text.hpp"

#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

namespace bridge {

namespace {

using Clock = std::chrono::steady_clock;

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

}  // namespace

std::string find_executable(std::string_view name) {
  if (name.empty()) return {};
  auto executable = [](const std::string& p) {
    struct stat st {};
    return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
  };
  if (name.find('/') != std::string_view::npos) {
    std::string p(name);
    return executable(p) ? p : std::string{};
  }
  const char* path = std::getenv("PATH");
  if (!path) return {};
  std::string_view rest = path;
  while (!rest.empty()) {
    auto colon = rest.find(':');
    std::string dir(rest.substr(0, colon));
    if (dir.empty()) dir = ".";
    std::string candidate = dir + "/" + std::string(name);
    if (executable(candidate)) return candidate;
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  return {};
}

ProcessResult run_process(const ProcessSpec& spec,
                          const std::function<void(std::string_view)>& on_line) {
  ProcessResult result;
  if (spec.argv.empty()) {
    result.spawn_failed = true;
    result.err = "empty argv";
    return result;
  }

  int out_pipe[2] = {-1, -1};
  int err_pipe[2] = {-1, -1};
  int exec_pipe[2] = {-1, -1};
  if (::pipe2(out_pipe, O_CLOEXEC) != 0 || ::pipe2(err_pipe, O_CLOEXEC) != 0 ||
      ::pipe2(exec_pipe, O_CLOEXEC) != 0) {
    result.spawn_failed = true;
    result.err = std::string("pipe: ") + std::strerror(errno);
    return result;
  }

  std::vector<char*> argv;
  for (const auto& a : spec.argv) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  std::vector<char*> envp;
  if (spec.env) {
    for (const auto& e : *spec.env) envp.push_back(const_cast<char*>(e.c_str()));
    envp.push_back(nullptr);
  }
  std::string cwd = spec.cwd.string();

  const auto start = Clock::now();
  pid_t pid = ::fork();
  if (pid < 0) {
    result.spawn_failed = true;
    result.err = std::string("fork: ") + std::strerror(errno);
    for (int* fd : {&out_pipe[0], &out_pipe[1], &err_pipe[0], &err_pipe[1], &exec_pipe[0], &exec_pipe[1]})
      close_fd(*fd);
    return result;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) {
      int e = errno;
      (void)!::write(exec_pipe[1], &e, sizeof e);
      ::_exit(127);
    }
    if (spec.env) {
      ::execve(argv[0], argv.data(), envp.data());
      // execve does not search PATH.
      std::string resolved = find_executable(argv[0]);
      if (!resolved.empty()) ::execve(resolved.c_str(), argv.data(), envp.data());
    } else {
      ::execvp(argv[0], argv.data());
    }
    int e = errno;
    (void)!::write(exec_pipe[1], &e, sizeof e);
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  close_fd(out_pipe[1]);
  close_fd(err_pipe[1]);
  close_fd(exec_pipe[1]);

  int exec_errno = 0;
  if (::read(exec_pipe[0], &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
    close_fd(exec_pipe[0]);
    close_fd(out_pipe[0]);
    close_fd(err_pipe[0]);
    int status = 0;
    ::waitpid(pid, &status, 0);
    result.spawn_failed = true;
    result.err = "cannot execute " + spec.argv[0] + ": " + std::strerror(exec_errno);
    return result;
  }
  close_fd(exec_pipe[0]);

  auto deadline = start + spec.timeout;
  std::string line_buf;
  char buf[8192];
  while (out_pipe[0] >= 0 || err_pipe[0] >= 0) {
    auto now = Clock::now();
    if (now >= deadline) {
      result.timed_out = true;
      break;
    }
    auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd fds[2];
    nfds_t nfds = 0;
    if (out_pipe[0] >= 0) fds[nfds++] = {out_pipe[0], POLLIN, 0};
    if (err_pipe[0] >= 0) fds[nfds++] = {err_pipe[0], POLLIN, 0};
    int rc = ::poll(fds, nfds, static_cast<int>(std::min<long long>(wait_ms + 1, 1000)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (nfds_t i = 0; i < nfds; ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      ssize_t n = ::read(fds[i].fd, buf, sizeof buf);
      bool is_out = fds[i].fd == out_pipe[0];
      if (n <= 0) {
        if (n < 0 && errno == EINTR) continue;
        close_fd(is_out ? out_pipe[0] : err_pipe[0]);
        continue;
      }
      if (!is_out) {
        result.err.append(buf, static_cast<std::size_t>(n));
        continue;
      }
      result.out.append(buf, static_cast<std::size_t>(n));
      line_buf.append(buf, static_cast<std::size_t>(n));
      std::size_t nl;
      bool saw_line = false;
      while ((nl = line_buf.find('\n')) != std::string::npos) {
        if (on_line) on_line(std::string_view(line_buf).substr(0, nl));
        line_buf.erase(0, nl + 1);
        saw_line = true;
      }
      if (saw_line && spec.timeout_resets_on_line) deadline = Clock::now() + spec.timeout;
    }
  }

  int status = 0;
  if (result.timed_out) {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);
    ::waitpid(pid, &status, 0);
  } else {
    // Pipes closed; the child may still be running if it detached its streams.
    while (true) {
      pid_t w = ::waitpid(pid, &status, WNOHANG);
      if (w == pid) break;
      if (Clock::now() >= deadline) {
        result.timed_out = true;
        ::kill(-pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        break;
      }
      ::usleep(2000);
    }
  }
  // Stray grandchildren in the group do not outlive the call.
  ::kill(-pid, SIGKILL);
  close_fd(out_pipe[0]);
  close_fd(err_pipe[0]);
  if (!line_buf.empty() && on_line && !result.timed_out) on_line(line_buf);

  result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  if (!result.timed_out) {
    if (WIFEXITED(status)) {
      result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
      result.signaled = true;
      result.term_signal = WTERMSIG(status);
    }
  }
  return result;
}

}  // namespace bridge
