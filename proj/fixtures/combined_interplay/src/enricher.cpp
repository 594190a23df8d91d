#include "src/enricher.hpp"

std::string Enricher::enrich_or_raw(const std::string& rec) {
  try {
    return enrich(rec);
  } catch (...) {
    return rec;
  }
}

std::string Enricher::enrich(const std::string& rec) { return enrich_rate(enrich_geo(rec)); }

std::string Enricher::enrich_geo(const std::string& rec) {
  try {
    return geo_service(rec);
  } catch (const GeoLookupFailed&) {
    ++fallbacks_;
    return rec + "|geo:none";
  }
}

std::string Enricher::enrich_rate(const std::string& rec) {
  try {
    return rate_service(rec);
  } catch (const RateLookupFailed&) {
    ++fallbacks_;
    return rec + "|rate:none";
  }
}

std::string Enricher::geo_service(const std::string& rec) {
  if (outage_) throw GeoOutage("geo provider outage");
  if (!geo_up_) throw GeoLookupFailed("geo lookup failed");
  return rec + "|geo:ok";
}

std::string Enricher::rate_service(const std::string& rec) {
  if (outage_) throw RateOutage("rate provider outage");
  if (!rate_up_) throw RateLookupFailed("rate lookup failed");
  return rec + "|rate:ok";
}
