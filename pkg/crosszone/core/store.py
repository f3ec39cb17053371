"""Result store: JSON documents and CSV artifacts under the output directory."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from crosszone.core.config import output_dir as default_output_dir
from crosszone.core.formats import format_sequence, matrix_to_csv
from crosszone.core.models import CommandSpec, SearchResult, SequencePair, TrainingMatrix

logger = logging.getLogger(__name__)


class ResultStore:
    """Writes and reads result documents under one output directory."""

    def __init__(self, output_dir: Optional[Union[str, Path]] = None):
        """Initialize the store.

        Args:
            output_dir: Directory for results; when omitted CROSSZONE_OUTPUT_DIR
                is used, then ./results
        """
        self._root = Path(output_dir) if output_dir is not None else default_output_dir()

    @property
    def root(self) -> Path:
        return self._root

    def path(self, name: str) -> Path:
        return self._root / name

    def _write(self, name: str, text: str) -> Path:
        self._root.mkdir(parents=True, exist_ok=True)
        target = self.path(name)
        target.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {target}")
        return target

    def save_document(self, name: str, payload: Dict[str, Any], command: Optional[CommandSpec] = None) -> Path:
        """Write a JSON document; the producing command is embedded when given.

        Args:
            name: File name relative to the output directory
            payload: JSON-serializable result
            command: Invocation that produced the result

        Returns:
            Path of the written file
        """
        document = {"command": command.model_dump(mode="json") if command else None, "result": payload}
        return self._write(name, json.dumps(document, indent=2, sort_keys=True) + "\n")

    def load_document(self, name: str) -> Dict[str, Any]:
        target = self.path(name)
        if not target.exists():
            raise FileNotFoundError(f"no result document at {target}")
        return json.loads(target.read_text(encoding="utf-8"))

    def save_search_result(self, result: SearchResult, command: Optional[CommandSpec] = None) -> Path:
        """Write search_n{N}.json. Wall time is left out so reruns are byte-identical."""
        payload = result.model_dump(mode="json", exclude={"elapsed"})
        payload["witness_text"] = [[format_sequence(w.a), format_sequence(w.b)] for w in result.witnesses]
        return self.save_document(f"search_n{result.n}.json", payload, command)

    def load_search_result(self, n: int) -> SearchResult:
        document = self.load_document(f"search_n{n}.json")
        payload = dict(document["result"])
        payload.pop("witness_text", None)
        return SearchResult(**payload)

    def save_csv(self, name: str, text: str) -> Path:
        return self._write(name, text)

    def save_matrix(self, name: str, omega: TrainingMatrix, metadata: Dict[str, Any]) -> Path:
        """Write a training matrix as CSV with its metadata header."""
        return self._write(name, matrix_to_csv(omega.entries, metadata))

    def save_pair(self, name: str, pair: SequencePair) -> Path:
        """Write a pair as two sequence lines, readable by parse_sequences."""
        return self._write(name, f"{format_sequence(pair.a)}\n{format_sequence(pair.b)}\n")
