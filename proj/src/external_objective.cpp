#include "shapebench/external_objective.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>
#include <string>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "shapebench/errors.hpp"

namespace shapebench {

namespace {

using Clock = std::chrono::steady_clock;

void ignore_sigpipe_once() {
    // A dead child turns request writes into EPIPE instead of killing us.
    static const int installed = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return 0;
    }();
    (void)installed;
}

}  // namespace

void ExternalObjectiveConfig::validate() const {
    if (command.empty() || command.front().empty()) {
        throw ConfigError("external.command must name an executable");
    }
    if (!(timeout_sec > 0.0) || !std::isfinite(timeout_sec)) {
        throw ConfigError("external.timeout_sec must be > 0");
    }
}

struct ExternalObjective::Child {
    pid_t pid = -1;
    int to_child = -1;    // we write requests here
    int from_child = -1;  // we read responses here
    std::string pending;  // bytes read past the last newline

    ~Child() { close_fds(); }

    void close_fds() noexcept {
        if (to_child >= 0) ::close(to_child);
        if (from_child >= 0) ::close(from_child);
        to_child = from_child = -1;
    }

    void reap(bool force) noexcept {
        if (pid < 0) return;
        if (force) ::kill(pid, SIGKILL);
        int status = 0;
        for (int i = 0; i < 200; ++i) {
            const pid_t r = ::waitpid(pid, &status, WNOHANG);
            if (r != 0) {
                pid = -1;
                return;
            }
            ::usleep(10'000);
        }
        ::kill(pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        pid = -1;
    }
};

ExternalObjective::ExternalObjective(ExternalObjectiveConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    ignore_sigpipe_once();
}

ExternalObjective::~ExternalObjective() { shutdown_child(); }

void ExternalObjective::shutdown_child() noexcept {
    if (!child_) return;
    if (child_->to_child >= 0) {
        ::close(child_->to_child);  // EOF on stdin asks the child to exit
        child_->to_child = -1;
    }
    child_->reap(false);
    child_.reset();
}

void ExternalObjective::ensure_child() {
    if (child_ && child_->pid >= 0) return;
    child_.reset();

    int in_pipe[2];   // parent -> child stdin
    int out_pipe[2];  // child stdout -> parent
    if (::pipe(in_pipe) != 0) throw ProcessError("pipe: " + std::string(std::strerror(errno)));
    if (::pipe(out_pipe) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        throw ProcessError("pipe: " + std::string(std::strerror(errno)));
    }

    const pid_t pid = ::fork();
    if (pid < 0) {
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
        throw ProcessError("fork: " + std::string(std::strerror(errno)));
    }
    if (pid == 0) {
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
        std::vector<char*> argv;
        argv.reserve(cfg_.command.size() + 1);
        for (const std::string& a : cfg_.command) argv.push_back(const_cast<char*>(a.c_str()));
        argv.push_back(nullptr);
        ::execvp(argv[0], argv.data());
        _exit(127);
    }

    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    child_ = std::make_unique<Child>();
    child_->pid = pid;
    child_->to_child = in_pipe[1];
    child_->from_child = out_pipe[0];
}

Kwh ExternalObjective::do_evaluate(const ShapeVector& x) {
    nlohmann::json request;
    request["x"] = x.values;
    const std::string line = request.dump() + "\n";

    auto send_request = [&]() -> bool {
        std::size_t off = 0;
        while (off < line.size()) {
            const ssize_t w =
                ::write(child_->to_child, line.data() + off, line.size() - off);
            if (w < 0) {
                if (errno == EINTR) continue;
                return false;  // EPIPE: child is gone
            }
            off += static_cast<std::size_t>(w);
        }
        return true;
    };

    auto read_line = [&](std::string& out) -> bool {
        const auto deadline =
            Clock::now() + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(cfg_.timeout_sec));
        std::string& buf = child_->pending;
        for (;;) {
            const std::size_t nl = buf.find('\n');
            if (nl != std::string::npos) {
                out = buf.substr(0, nl);
                buf.erase(0, nl + 1);
                return true;
            }
            const auto remaining = deadline - Clock::now();
            if (remaining <= Clock::duration::zero()) {
                child_->reap(true);
                child_.reset();
                throw EvalTimeout("external objective: no response within " +
                                  std::to_string(cfg_.timeout_sec) + " s");
            }
            struct pollfd pfd{child_->from_child, POLLIN, 0};
            const int timeout_ms = static_cast<int>(
                std::chrono::duration_cast<std::chrono::milliseconds>(remaining).count() + 1);
            const int pr = ::poll(&pfd, 1, timeout_ms);
            if (pr < 0) {
                if (errno == EINTR) continue;
                return false;
            }
            if (pr == 0) continue;  // loop re-checks the deadline
            char chunk[4096];
            const ssize_t r = ::read(child_->from_child, chunk, sizeof(chunk));
            if (r < 0) {
                if (errno == EINTR) continue;
                return false;
            }
            if (r == 0) return false;  // EOF before a full line
            buf.append(chunk, static_cast<std::size_t>(r));
        }
    };

    for (int attempt = 0;; ++attempt) {
        ensure_child();
        std::string response;
        if (send_request() && read_line(response)) {
            nlohmann::json parsed;
            try {
                parsed = nlohmann::json::parse(response);
            } catch (const nlohmann::json::parse_error&) {
                throw ProtocolError("external objective: unparseable response: " + response);
            }
            if (parsed.is_object() && parsed.contains("error")) {
                throw ProtocolError("external objective reported: " +
                                    parsed["error"].dump());
            }
            if (!parsed.is_object() || !parsed.contains("kwh") ||
                !parsed["kwh"].is_number()) {
                throw ProtocolError("external objective: response lacks a numeric kwh field");
            }
            const double kwh = parsed["kwh"].get<double>();
            if (!std::isfinite(kwh) || kwh < 0.0) {
                throw ProtocolError("external objective: kwh must be finite and >= 0");
            }
            return kwh;
        }
        // Child died before responding.
        child_->reap(false);
        child_.reset();
        if (!cfg_.restart_on_crash || attempt >= 1) {
            throw ProcessError("external objective: child exited before responding");
        }
    }
}

}  // namespace shapebench
