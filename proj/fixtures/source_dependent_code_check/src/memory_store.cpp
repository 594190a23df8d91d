#include "src/memory_store.hpp"

void MemoryStore::halt_engine() {
  if (corrupted_) throw StoreError("store state corrupted", 7);
  if (!running_) throw StoreError("engine not running", 41);
  running_ = false;
}

void MemoryStore::stop() {
  try {
    halt_engine();
  } catch (const StoreError& e) {
    // Code 41 means there is nothing to halt; everything else is fatal.
    if (e.code() != 41) throw;
  }
  stopped_ = true;
}
