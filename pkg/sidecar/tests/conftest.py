import base64
import io
import wave

import numpy as np
import pytest
from fastapi.testclient import TestClient

from neurox_sidecar.app import create_app
from neurox_sidecar.backends import StubBackend
from neurox_sidecar.config import Settings


@pytest.fixture(scope="session")
def client() -> TestClient:
    app = create_app(Settings(backend="stub"), backend=StubBackend())
    return TestClient(app, raise_server_exceptions=False)


def wav_b64(samples: np.ndarray, sample_rate: int = 16000) -> str:
    pcm = np.clip(np.round(samples * 32768.0), -32768, 32767).astype("<i2")
    buf = io.BytesIO()
    with wave.open(buf, "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(sample_rate)
        wav.writeframes(pcm.tobytes())
    return base64.b64encode(buf.getvalue()).decode("ascii")


def tone(freq: float = 220.0, duration_s: float = 0.5,
         sample_rate: int = 16000) -> np.ndarray:
    t = np.arange(int(duration_s * sample_rate)) / sample_rate
    return 0.5 * np.sin(2 * np.pi * freq * t)
