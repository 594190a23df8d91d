#include "src/channel.hpp"

void Channel::push(const std::string& message) {
  if (!open_) throw ChannelClosed("channel closed");
  log_.push_back(message);
}

void Channel::send(const std::string& message) {
  try {
    push(message);
  } catch (const ChannelClosed&) {
    reopen();
    push(message);
  }
}
