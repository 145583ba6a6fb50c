#pragma once

#include "jamscan/core/errors.hpp"
#include "jamscan/core/types.hpp"
#include "jamscan/cyclo/autocorr.hpp"
#include "jamscan/cyclo/coherence.hpp"
#include "jamscan/cyclo/fam.hpp"
#include "jamscan/cyclo/profile.hpp"
#include "jamscan/detect/classify.hpp"
#include "jamscan/detect/energy.hpp"
#include "jamscan/detect/peaks.hpp"
#include "jamscan/detect/tracker.hpp"
#include "jamscan/io/grid_file.hpp"
#include "jamscan/io/iq_file.hpp"
#include "jamscan/io/mission.hpp"
#include "jamscan/io/pipeline.hpp"
#include "jamscan/io/records.hpp"
#include "jamscan/localize/fusion.hpp"
#include "jamscan/localize/pattern.hpp"
#include "jamscan/localize/source.hpp"
#include "jamscan/synth/prn.hpp"
#include "jamscan/synth/scenario.hpp"
#include "jamscan/synth/waveform.hpp"
