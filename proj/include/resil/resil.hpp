#pragma once

#include "resil/diff.hpp"
#include "resil/engine.hpp"
#include "resil/errors.hpp"
#include "resil/harness.hpp"
#include "resil/instrumenter.hpp"
#include "resil/pipeline.hpp"
#include "resil/report.hpp"
#include "resil/site_model.hpp"
#include "resil/source_scan.hpp"
#include "resil/stretcher.hpp"
#include "resil/trace.hpp"
