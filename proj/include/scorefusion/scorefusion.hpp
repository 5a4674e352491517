#pragma once

#include "scorefusion/error.hpp"
#include "scorefusion/score_model.hpp"
#include "scorefusion/normalize.hpp"
#include "scorefusion/fuse.hpp"
#include "scorefusion/evaluate.hpp"
#include "scorefusion/synth.hpp"
#include "scorefusion/io.hpp"
#include "scorefusion/export.hpp"
#include "scorefusion/scenario.hpp"
