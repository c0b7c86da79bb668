#pragma once

#include "lexseq/chern.hpp"
#include "lexseq/cobordism.hpp"
#include "lexseq/errors.hpp"
#include "lexseq/exact_linalg.hpp"
#include "lexseq/gysin.hpp"
#include "lexseq/labels.hpp"
#include "lexseq/mayer_vietoris.hpp"
#include "lexseq/pipeline.hpp"
#include "lexseq/scenario.hpp"
#include "lexseq/torus_forms.hpp"
