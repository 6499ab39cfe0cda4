"""WAV ingestion and the MFCC audio front end."""

from audio.fft import fft, next_power_of_two, power_spectrum
from audio.mfcc import (
    MfccConfig,
    extract_audio_features,
    frame_count,
    hz_to_mel,
    mel_filterbank,
    mel_to_hz,
    mfcc_channel,
    per_second_average,
)
from audio.wav import AudioClip, read_wav, scan_wav_header, write_wav

__all__ = [
    "AudioClip",
    "MfccConfig",
    "extract_audio_features",
    "fft",
    "frame_count",
    "hz_to_mel",
    "mel_filterbank",
    "mel_to_hz",
    "mfcc_channel",
    "next_power_of_two",
    "per_second_average",
    "power_spectrum",
    "read_wav",
    "scan_wav_header",
    "write_wav",
]
