#include "src/indexer.hpp"

DocumentIndexer::DocumentIndexer() { fields_["d"]["name"] = "alpha"; }

void DocumentIndexer::parse_checked(const std::string& doc) {
  if (doc.rfind("bad:", 0) == 0) throw ParseFailure("unparseable document: " + doc);
}

int DocumentIndexer::store_blob(const std::string& blob) {
  if (blob == "corrupt") throw IndexCorrupt("blob crosses a segment boundary");
  if (blob == "io") throw IoFailure("segment write failed");
  return 1;
}

std::string DocumentIndexer::lookup_field(const std::string& doc, const std::string& key) {
  if (lock_held_) throw LockBusy("index lock held");
  auto d = fields_.find(doc);
  if (d == fields_.end() || !d->second.count(key)) throw MissingField("missing field: " + key);
  return d->second.at(key);
}

std::string DocumentIndexer::lookup_field_unlocked(const std::string& doc,
                                                   const std::string& key) {
  auto d = fields_.find(doc);
  if (d == fields_.end() || !d->second.count(key)) return "<stale>";
  return d->second.at(key);
}

bool DocumentIndexer::add(const std::string& doc) {
  try {
    parse_checked(doc);
    ++stored_;
    return true;
  } catch (const ParseFailure&) {
    return false;
  }
}

int DocumentIndexer::load_all(const std::vector<std::string>& blobs) {
  try {
    int n = 0;
    for (const auto& b : blobs) {
      try {
        n += store_blob(b);
      } catch (const IndexCorrupt&) {
        repair();
        n += 1;
      }
    }
    return n;
  } catch (const IoFailure&) {
    return -1;
  }
}

std::string DocumentIndexer::field_of(const std::string& doc, const std::string& key) {
  try {
    return lookup_field(doc, key);
  } catch (const LockBusy&) {
    return lookup_field_unlocked(doc, key);
  }
}

std::string DocumentIndexer::field_or_empty(const std::string& doc, const std::string& key) {
  try {
    return field_of(doc, key);
  } catch (const MissingField&) {
    return "";
  }
}
