#pragma once

#include <stdexcept>
#include <string>

struct GeoLookupFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RateLookupFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeoOutage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RateOutage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Enricher {
 public:
  Enricher(bool geo_up, bool rate_up, bool outage)
      : geo_up_(geo_up), rate_up_(rate_up), outage_(outage) {}

  std::string enrich_or_raw(const std::string& rec);
  int fallback_count() const { return fallbacks_; }

 private:
  std::string enrich(const std::string& rec);
  std::string enrich_geo(const std::string& rec);
  std::string enrich_rate(const std::string& rec);
  std::string geo_service(const std::string& rec);
  std::string rate_service(const std::string& rec);

  bool geo_up_;
  bool rate_up_;
  bool outage_;
  int fallbacks_ = 0;
};
