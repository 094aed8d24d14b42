#include "pgt/external_backend.hpp"

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>

#include <json.hpp>

#include "pgt/io.hpp"

extern char** environ;

namespace pgt {

namespace {

void ignore_sigpipe()
{
    static std::once_flag once;
    std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string errno_message(const char* what)
{
    return std::string(what) + ": " + std::strerror(errno);
}

}  // namespace

WorkerProcess::WorkerProcess(const std::vector<std::string>& argv,
                             const std::vector<std::string>& env)
{
    if (argv.empty()) throw TransportError("worker command is empty");
    ignore_sigpipe();

    int in_pipe[2];
    int out_pipe[2];
    if (::pipe(in_pipe) != 0) throw TransportError(errno_message("pipe"));
    if (::pipe(out_pipe) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        throw TransportError(errno_message("pipe"));
    }

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) {
        posix_spawn_file_actions_addclose(&actions, fd);
    }

    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    std::vector<std::string> env_storage;
    for (char** e = environ; e && *e; ++e) env_storage.emplace_back(*e);
    env_storage.insert(env_storage.end(), env.begin(), env.end());
    std::vector<char*> envp;
    for (auto& e : env_storage) envp.push_back(e.data());
    envp.push_back(nullptr);

    pid_t pid = -1;
    const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), envp.data());
    posix_spawn_file_actions_destroy(&actions);
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    if (rc != 0) {
        ::close(in_pipe[1]);
        ::close(out_pipe[0]);
        throw TransportError("cannot spawn '" + argv[0] + "': " + std::strerror(rc));
    }
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
}

WorkerProcess::~WorkerProcess() { shutdown(); }

void WorkerProcess::shutdown()
{
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
        int status = 0;
        if (::waitpid(pid_, &status, WNOHANG) == 0) {
            ::kill(pid_, SIGTERM);
            ::waitpid(pid_, &status, 0);
        }
        pid_ = -1;
    }
}

std::string WorkerProcess::exchange(const std::string& line, std::chrono::milliseconds timeout)
{
    if (!alive()) throw TransportError("worker is not running");

    std::string payload = line;
    payload.push_back('\n');
    std::size_t written = 0;
    while (written < payload.size()) {
        const ssize_t n = ::write(to_child_, payload.data() + written, payload.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            shutdown();
            throw TransportError(errno_message("write to worker"));
        }
        written += static_cast<std::size_t>(n);
    }

    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        const auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string out = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return out;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            shutdown();
            throw TransportError("worker timed out");
        }
        pollfd pfd{from_child_, POLLIN, 0};
        const int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
        if (pr < 0) {
            if (errno == EINTR) continue;
            shutdown();
            throw TransportError(errno_message("poll"));
        }
        if (pr == 0) continue;
        char chunk[4096];
        const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) continue;
            shutdown();
            throw TransportError(errno_message("read from worker"));
        }
        if (n == 0) {
            shutdown();
            throw TransportError("worker closed its output");
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

std::string encode_request(const std::string& image_id, std::span<const OrientedBox> boxes)
{
    nlohmann::json boxes_json = nlohmann::json::array();
    for (const auto& b : boxes) boxes_json.push_back(box_to_json(b));
    nlohmann::json req;
    req["image_id"] = image_id;
    req["boxes"] = std::move(boxes_json);
    return req.dump();
}

std::vector<RecognitionResult> decode_response(const std::string& line, std::size_t expected)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProtocolError(std::string("malformed response line: ") + e.what());
    }
    if (!j.is_object()) throw ProtocolError("response is not an object");
    if (j.contains("error")) {
        throw BackendError("worker error: " + j["error"].dump());
    }
    if (!j.contains("results") || !j["results"].is_array()) {
        throw ProtocolError("response has no results array");
    }
    const auto& results = j["results"];
    if (results.size() != expected) {
        throw ProtocolError("response has " + std::to_string(results.size()) +
                            " results for " + std::to_string(expected) + " boxes");
    }
    std::vector<RecognitionResult> out;
    out.reserve(expected);
    for (const auto& r : results) {
        if (!r.is_object() || !r.contains("text") || !r["text"].is_string()) {
            throw ProtocolError("result without a text string");
        }
        RecognitionResult rr;
        rr.text = r["text"].get<std::string>();
        if (r.contains("confidence")) {
            if (!r["confidence"].is_number()) throw ProtocolError("confidence is not a number");
            rr.confidence = r["confidence"].get<double>();
            if (rr.confidence < 0.0 || rr.confidence > 1.0) {
                throw ProtocolError("confidence outside [0, 1]");
            }
        }
        out.push_back(std::move(rr));
    }
    return out;
}

ExternalBackend::ExternalBackend(ExternalBackendOptions options) : options_(std::move(options))
{
    if (options_.command.empty()) throw std::invalid_argument("external backend needs a command");
    if (options_.workers == 0) options_.workers = 1;
    // Spawn one worker eagerly so a bad command fails fast.
    idle_.push_back(std::make_unique<WorkerProcess>(options_.command, options_.env));
    spawned_ = 1;
}

ExternalBackend::~ExternalBackend() = default;

std::unique_ptr<WorkerProcess> ExternalBackend::acquire()
{
    std::unique_lock lock(mutex_);
    for (;;) {
        if (!idle_.empty()) {
            auto w = std::move(idle_.back());
            idle_.pop_back();
            return w;
        }
        if (spawned_ < options_.workers) {
            ++spawned_;
            lock.unlock();
            try {
                return std::make_unique<WorkerProcess>(options_.command, options_.env);
            } catch (...) {
                lock.lock();
                --spawned_;
                throw;
            }
        }
        available_.wait(lock);
    }
}

void ExternalBackend::release(std::unique_ptr<WorkerProcess> worker)
{
    {
        std::lock_guard lock(mutex_);
        if (worker && worker->alive()) {
            idle_.push_back(std::move(worker));
        } else {
            --spawned_;
        }
    }
    available_.notify_one();
}

std::vector<RecognitionResult> ExternalBackend::recognize_batch(const std::string& image_id,
                                                                std::span<const OrientedBox> boxes)
{
    if (boxes.empty()) return {};
    auto worker = acquire();
    std::vector<RecognitionResult> out;
    try {
        const std::string reply = worker->exchange(encode_request(image_id, boxes), options_.timeout);
        out = decode_response(reply, boxes.size());
    } catch (...) {
        release(std::move(worker));
        throw;
    }
    release(std::move(worker));
    count_recognitions(boxes.size());
    return out;
}

}  // namespace pgt
