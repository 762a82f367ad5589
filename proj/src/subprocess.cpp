#include "subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>

namespace nnc {

namespace {

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void set_nonblocking(int fd) {
  int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& input, double deadline_seconds) {
  ProcessResult result;
  if (argv.empty()) {
    result.error = "empty command";
    return result;
  }
  ignore_sigpipe_once();

  int in_pipe[2];   // parent writes -> child stdin
  int out_pipe[2];  // child stdout -> parent reads
  if (pipe(in_pipe) != 0) {
    result.error = std::strerror(errno);
    return result;
  }
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    result.error = std::strerror(errno);
    return result;
  }

  pid_t pid = fork();
  if (pid < 0) {
    result.error = std::strerror(errno);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    return result;
  }

  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }

  close(in_pipe[0]);
  close(out_pipe[1]);
  int write_fd = in_pipe[1];
  int read_fd = out_pipe[0];
  set_nonblocking(write_fd);
  set_nonblocking(read_fd);

  result.spawned = true;
  const double start = now_seconds();
  std::size_t written = 0;
  bool write_done = input.empty();
  if (write_done) {
    close(write_fd);
    write_fd = -1;
  }

  char buffer[4096];
  bool read_done = false;
  while (!read_done) {
    double remaining = deadline_seconds - (now_seconds() - start);
    if (remaining <= 0.0) {
      result.timed_out = true;
      kill(pid, SIGKILL);
      break;
    }

    struct pollfd fds[2];
    nfds_t nfds = 0;
    int read_slot = -1, write_slot = -1;
    if (!read_done) {
      fds[nfds] = {read_fd, POLLIN, 0};
      read_slot = static_cast<int>(nfds++);
    }
    if (!write_done) {
      fds[nfds] = {write_fd, POLLOUT, 0};
      write_slot = static_cast<int>(nfds++);
    }

    int timeout_ms = static_cast<int>(remaining * 1000.0) + 1;
    int rc = poll(fds, nfds, timeout_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      result.error = std::strerror(errno);
      kill(pid, SIGKILL);
      break;
    }
    if (rc == 0) continue;  // loop re-checks the deadline

    if (write_slot >= 0 && (fds[write_slot].revents & (POLLOUT | POLLERR))) {
      ssize_t n = write(write_fd, input.data() + written,
                        input.size() - written);
      if (n > 0) {
        written += static_cast<std::size_t>(n);
      } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
        write_done = true;  // child closed its stdin; not fatal
      }
      if (written == input.size()) write_done = true;
      if (write_done) {
        close(write_fd);
        write_fd = -1;
      }
    }

    if (read_slot >= 0 &&
        (fds[read_slot].revents & (POLLIN | POLLHUP | POLLERR))) {
      ssize_t n = read(read_fd, buffer, sizeof(buffer));
      if (n > 0) {
        result.output.append(buffer, static_cast<std::size_t>(n));
      } else if (n == 0) {
        read_done = true;
      } else if (errno != EAGAIN && errno != EINTR) {
        read_done = true;
      }
    }
  }

  if (write_fd >= 0) close(write_fd);
  close(read_fd);

  int status = 0;
  waitpid(pid, &status, 0);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  if (result.exit_code == 127 && result.output.empty()) {
    result.spawned = false;
    result.error = "cannot execute " + argv[0];
  }
  return result;
}

}  // namespace nnc
