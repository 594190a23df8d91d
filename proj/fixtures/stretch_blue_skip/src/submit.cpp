#include "src/submit.hpp"

void SubmitService::validate(const std::string& field) {
  if (!field.empty() && field[0] == '!') throw ValidationError("invalid field: " + field);
}

std::string SubmitService::store_primary(const std::string& field) {
  if (!primary_up_) throw StorageError("primary store down");
  return "stored:" + field;
}

std::string SubmitService::store_backup(const std::string& field) { return "spooled:" + field; }

std::string SubmitService::submit(const std::string& field) {
  try {
    validate(field);
    return store_primary(field);
  } catch (const StorageError&) {
    return store_backup(field);
  }
}
