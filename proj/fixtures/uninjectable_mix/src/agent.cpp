#include "src/agent.hpp"

std::string Agent::check_license(const std::string& key) {
  if (key != "valid") throw LicenseError(42);
  return "licensed";
}

std::string Agent::transmit(const std::string& peer, const std::string& message) {
  if (peer == "down") throw PeerUnreachable(peer);
  return "sent:" + message;
}

std::string Agent::activate(const std::string& key) {
  try {
    return check_license(key);
  } catch (const LicenseError&) {
    return "trial";
  }
}

std::string Agent::send(const std::string& peer, const std::string& message) {
  try {
    return transmit(peer, message);
  } catch (const TransportFailure&) {
    return "spooled";
  }
}
