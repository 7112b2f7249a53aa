//
// Copyright 2026 The entailgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "entailgen/discriminator.hpp"
#include "entailgen/error.hpp"

namespace entailgen::remote {

using nlohmann::json;

// Newline-delimited message stream.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void send_line(const std::string& line) = 0;
  virtual std::string recv_line(std::chrono::milliseconds timeout) = 0;
};

// Channel over a pair of file descriptors it owns.
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}
  ~FdChannel() override { close_fds(); }
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void send_line(const std::string& line) override {
    std::string buf = line + "\n";
    std::size_t off = 0;
    while (off < buf.size()) {
      ssize_t n = send_or_write(write_fd_, buf.data() + off, buf.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorCode::kConnectionFailed, std::string("write: ") + std::strerror(errno));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string recv_line(std::chrono::milliseconds timeout) override {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) throw Error(ErrorCode::kTimeout, "no reply within deadline");
      pollfd pfd{read_fd_, POLLIN, 0};
      int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorCode::kConnectionFailed, std::string("poll: ") + std::strerror(errno));
      }
      if (rc == 0) throw Error(ErrorCode::kTimeout, "no reply within deadline");
      char chunk[65536];
      ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorCode::kConnectionFailed, std::string("read: ") + std::strerror(errno));
      }
      if (n == 0) throw Error(ErrorCode::kConnectionFailed, "peer closed the stream");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 protected:
  void close_fds() {
    if (read_fd_ >= 0) ::close(read_fd_);
    if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
    read_fd_ = write_fd_ = -1;
  }

 private:
  static ssize_t send_or_write(int fd, const char* data, std::size_t len) {
    ssize_t n = ::send(fd, data, len, MSG_NOSIGNAL);
    if (n < 0 && errno == ENOTSOCK) n = ::write(fd, data, len);
    return n;
  }

  int read_fd_;
  int write_fd_;
  std::string buffer_;
};

// Runs `/bin/sh -c command` and talks to it over its stdin/stdout.
class SubprocessChannel final : public FdChannel {
 public:
  static std::unique_ptr<SubprocessChannel> spawn(const std::string& command) {
    int to_child[2], from_child[2];
    if (::pipe(to_child) != 0) throw Error(ErrorCode::kConnectionFailed, "pipe failed");
    if (::pipe(from_child) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw Error(ErrorCode::kConnectionFailed, "pipe failed");
    }
    ::signal(SIGPIPE, SIG_IGN);
    pid_t pid = ::fork();
    if (pid < 0) throw Error(ErrorCode::kConnectionFailed, "fork failed");
    if (pid == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    return std::unique_ptr<SubprocessChannel>(
        new SubprocessChannel(from_child[0], to_child[1], pid));
  }

  ~SubprocessChannel() override {
    close_fds();
    if (pid_ > 0) {
      int status = 0;
      for (int i = 0; i < 50; ++i) {
        if (::waitpid(pid_, &status, WNOHANG) == pid_) return;
        ::usleep(10000);
      }
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
  }

 private:
  SubprocessChannel(int read_fd, int write_fd, pid_t pid) : FdChannel(read_fd, write_fd), pid_(pid) {}
  pid_t pid_;
};

inline std::unique_ptr<FdChannel> connect_tcp(const std::string& host, const std::string& port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    throw Error(ErrorCode::kConnectionFailed, host + ":" + port + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* a = res; a; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw Error(ErrorCode::kConnectionFailed, "cannot connect to " + host + ":" + port);
  return std::make_unique<FdChannel>(fd, fd);
}

// "tcp:HOST:PORT" or "exec:COMMAND".
inline std::unique_ptr<LineChannel> open_endpoint(const std::string& endpoint) {
  if (endpoint.starts_with("tcp:")) {
    const std::string rest = endpoint.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) throw Error(ErrorCode::kConfig, "bad endpoint " + endpoint);
    return connect_tcp(rest.substr(0, colon), rest.substr(colon + 1));
  }
  if (endpoint.starts_with("exec:")) return SubprocessChannel::spawn(endpoint.substr(5));
  throw Error(ErrorCode::kConfig, "endpoint must be tcp:HOST:PORT or exec:COMMAND, got " + endpoint);
}

inline json example_json(const Example& e, LabelScheme scheme) {
  return json{{"premise", e.premise.render()},
              {"hypothesis", e.hypothesis.render()},
              {"label", std::string(label_name(e.label, scheme))}};
}

// Discriminator whose parameters live in an external process.
class RemoteDiscriminator final : public disc::Discriminator {
 public:
  explicit RemoteDiscriminator(std::unique_ptr<LineChannel> channel,
                               std::chrono::milliseconds timeout = std::chrono::seconds(30))
      : channel_(std::move(channel)), timeout_(timeout) {
    json reply = call(json{{"op", "info"}});
    if (!reply.contains("classes") || !reply["classes"].is_number_integer()) {
      throw Error(ErrorCode::kProtocol, "info reply lacks integer \"classes\"");
    }
    const int k = reply["classes"].get<int>();
    if (k == 3) {
      scheme_ = LabelScheme::kThreeClass;
    } else if (k == 2) {
      scheme_ = LabelScheme::kSciTailTwoClass;
    } else {
      throw Error(ErrorCode::kProtocol, "unsupported class count " + std::to_string(k));
    }
  }

  static std::unique_ptr<RemoteDiscriminator> connect(const std::string& endpoint,
                                                      std::chrono::milliseconds timeout =
                                                          std::chrono::seconds(30)) {
    return std::make_unique<RemoteDiscriminator>(open_endpoint(endpoint), timeout);
  }

  LabelScheme scheme() const override { return scheme_; }

  std::vector<std::vector<double>> predict(std::span<const Example> pairs) const override {
    json req{{"op", "predict"}, {"pairs", json::array()}};
    for (const auto& e : pairs) {
      req["pairs"].push_back(json::array({e.premise.render(), e.hypothesis.render()}));
    }
    json reply = call(req);
    const auto* probs = reply.contains("probs") ? &reply["probs"] : nullptr;
    if (!probs || !probs->is_array() || probs->size() != pairs.size()) {
      throw Error(ErrorCode::kProtocol, "predict reply must carry one probability row per pair");
    }
    std::vector<std::vector<double>> out;
    out.reserve(pairs.size());
    for (const auto& row : *probs) {
      if (!row.is_array() || row.size() != num_classes()) {
        throw Error(ErrorCode::kProtocol, "probability row has wrong arity");
      }
      std::vector<double> r;
      double sum = 0.0;
      for (const auto& v : row) {
        if (!v.is_number()) throw Error(ErrorCode::kProtocol, "non-numeric probability");
        const double x = v.get<double>();
        if (!std::isfinite(x) || x < 0.0) throw Error(ErrorCode::kProtocol, "invalid probability");
        r.push_back(x);
        sum += x;
      }
      if (std::abs(sum - 1.0) > 1e-6) throw Error(ErrorCode::kProtocol, "probabilities do not sum to 1");
      out.push_back(std::move(r));
    }
    return out;
  }

  double train_step(std::span<const Example> examples) override {
    if (examples.empty()) throw Error(ErrorCode::kEmptyBatch, "train_step on empty batch");
    json reply = call(json{{"op", "train"}, {"examples", examples_json(examples)}});
    return finite_field(reply, "loss");
  }

  disc::EvalReport evaluate(std::span<const Example> data) const override {
    json reply = call(json{{"op", "eval"}, {"examples", examples_json(data)}});
    disc::EvalReport r;
    r.count = data.size();
    r.accuracy = finite_field(reply, "accuracy");
    r.mean_loss = finite_field(reply, "loss");
    return r;
  }

 private:
  json examples_json(std::span<const Example> examples) const {
    json arr = json::array();
    for (const auto& e : examples) arr.push_back(example_json(e, scheme_));
    return arr;
  }

  static double finite_field(const json& reply, const char* key) {
    if (!reply.contains(key) || !reply[key].is_number()) {
      throw Error(ErrorCode::kProtocol, std::string("reply lacks numeric \"") + key + "\"");
    }
    const double v = reply[key].get<double>();
    if (!std::isfinite(v)) throw Error(ErrorCode::kProtocol, std::string("non-finite \"") + key + "\"");
    return v;
  }

  json call(const json& request) const {
    std::lock_guard lock(mu_);
    channel_->send_line(request.dump());
    const std::string line = channel_->recv_line(timeout_);
    json reply;
    try {
      reply = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kProtocol, std::string("malformed reply: ") + e.what());
    }
    if (!reply.is_object()) throw Error(ErrorCode::kProtocol, "reply is not a JSON object");
    if (reply.contains("error")) {
      throw Error(ErrorCode::kProtocol, "remote error: " + reply["error"].dump());
    }
    return reply;
  }

  mutable std::mutex mu_;
  std::unique_ptr<LineChannel> channel_;
  std::chrono::milliseconds timeout_;
  LabelScheme scheme_ = LabelScheme::kThreeClass;
};

// Server side of the protocol for an in-process discriminator. Returns an
// {"error": ...} object for malformed requests.
inline json handle_request(disc::Discriminator& model, const std::string& line) {
  try {
    const json req = json::parse(line);
    const std::string op = req.at("op").get<std::string>();
    auto parse_examples = [&](const json& arr) {
      std::vector<Example> out;
      for (const auto& e : arr) {
        out.push_back(make_example(e.at("premise").get<std::string>(),
                                   e.at("hypothesis").get<std::string>(),
                                   parse_label(e.at("label").get<std::string>(), model.scheme())));
      }
      return out;
    };
    if (op == "info") return json{{"classes", model.num_classes()}};
    if (op == "predict") {
      std::vector<Example> pairs;
      for (const auto& p : req.at("pairs")) {
        pairs.push_back(make_example(p.at(0).get<std::string>(), p.at(1).get<std::string>(),
                                     Label::kEntails));
      }
      return json{{"probs", model.predict(pairs)}};
    }
    if (op == "train") return json{{"loss", model.train_step(parse_examples(req.at("examples")))}};
    if (op == "eval") {
      auto r = model.evaluate(parse_examples(req.at("examples")));
      return json{{"accuracy", r.accuracy}, {"loss", r.mean_loss}};
    }
    return json{{"error", "unknown op " + op}};
  } catch (const std::exception& e) {
    return json{{"error", e.what()}};
  }
}

// Serves requests until end of input, one reply line per request line.
inline void serve(disc::Discriminator& model, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << handle_request(model, line).dump() << "\n" << std::flush;
  }
}

}  // namespace entailgen::remote
