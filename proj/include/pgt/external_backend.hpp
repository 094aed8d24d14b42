#pragma once

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pgt/recognizer.hpp"

namespace pgt {

/// A child process speaking newline-delimited JSON over stdin/stdout.
class WorkerProcess {
public:
    /// Spawns argv[0] with the given arguments. Extra environment entries are
    /// "NAME=value" strings added to the inherited environment.
    WorkerProcess(const std::vector<std::string>& argv, const std::vector<std::string>& env);
    ~WorkerProcess();

    WorkerProcess(const WorkerProcess&) = delete;
    WorkerProcess& operator=(const WorkerProcess&) = delete;

    /// Writes one line and reads one line back. Throws TransportError on
    /// write failure, EOF or timeout.
    std::string exchange(const std::string& line, std::chrono::milliseconds timeout);

    bool alive() const { return pid_ > 0; }

private:
    void shutdown();

    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
};

struct ExternalBackendOptions {
    std::vector<std::string> command;
    std::vector<std::string> env;
    std::size_t workers = 1;
    std::chrono::milliseconds timeout{30000};
};

/// Request line for one batch.
std::string encode_request(const std::string& image_id, std::span<const OrientedBox> boxes);
/// Parses a response line; throws ProtocolError on malformed input or when
/// the result count differs from `expected`.
std::vector<RecognitionResult> decode_response(const std::string& line, std::size_t expected);

/// Backend that forwards batches to a pool of worker processes, one in-flight
/// batch per worker.
class ExternalBackend : public RecognitionBackend {
public:
    explicit ExternalBackend(ExternalBackendOptions options);
    ~ExternalBackend() override;

    std::vector<RecognitionResult> recognize_batch(const std::string& image_id,
                                                   std::span<const OrientedBox> boxes) override;
    bool concurrent() const override { return true; }

private:
    std::unique_ptr<WorkerProcess> acquire();
    void release(std::unique_ptr<WorkerProcess> worker);

    ExternalBackendOptions options_;
    std::mutex mutex_;
    std::condition_variable available_;
    std::vector<std::unique_ptr<WorkerProcess>> idle_;
    std::size_t spawned_ = 0;
};

}  // namespace pgt
