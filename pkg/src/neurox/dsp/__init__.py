"""Self-contained signal processing kernels for the acoustic feature vector."""

from .audio import AudioClip, AudioFormatError, load_audio, resample, wav_bytes, write_wav
from .features import (
    FEATURE_NAMES,
    N_FEATURES,
    SCHEMA_VERSION,
    AcousticFeatureVector,
    extract_acoustic_features,
)
from .mfcc import compute_mfcc, mel_filterbank
from .pitch import PitchTrack, estimate_pitch
from .quality import VoiceQuality, compute_voice_quality
from .vad import PAUSE, SPEECH, VoicingSegments, detect_speech_pauses

__all__ = [
    "AudioClip",
    "AudioFormatError",
    "load_audio",
    "resample",
    "wav_bytes",
    "write_wav",
    "FEATURE_NAMES",
    "N_FEATURES",
    "SCHEMA_VERSION",
    "AcousticFeatureVector",
    "extract_acoustic_features",
    "compute_mfcc",
    "mel_filterbank",
    "PitchTrack",
    "estimate_pitch",
    "VoiceQuality",
    "compute_voice_quality",
    "PAUSE",
    "SPEECH",
    "VoicingSegments",
    "detect_speech_pauses",
]
