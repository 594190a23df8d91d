#pragma once

#include <exception>
#include <stdexcept>
#include <string>

// Licensing rejects anything but its own code-carrying constructor, so the
// analyzer cannot synthesize it.
class LicenseError final : public std::runtime_error {
 public:
  explicit LicenseError(int code)
      : std::runtime_error("license failure " + std::to_string(code)), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

struct TransportFailure : std::exception {
  const char* what() const noexcept override = 0;
};

class PeerUnreachable : public TransportFailure {
 public:
  explicit PeerUnreachable(const std::string& peer) : message_("peer unreachable: " + peer) {}
  const char* what() const noexcept override { return message_.c_str(); }

 private:
  std::string message_;
};

class Agent {
 public:
  std::string activate(const std::string& key);
  std::string send(const std::string& peer, const std::string& message);

 private:
  std::string check_license(const std::string& key);
  std::string transmit(const std::string& peer, const std::string& message);
};
