#pragma once

#include "pte/classify.hpp"
#include "pte/corpus.hpp"
#include "pte/embedding.hpp"
#include "pte/inference.hpp"
#include "pte/manifest.hpp"
#include "pte/pipeline.hpp"
#include "pte/sampler.hpp"
#include "pte/textnet.hpp"
#include "pte/trainer.hpp"
