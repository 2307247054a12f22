import numpy as np
import pytest

from neural_adapter.export import export_action_embeddings, export_summaries
from conftest import write_flat_corpus


class TestSummaries:
    def test_one_vector_per_key_with_model_width(self, flat_corpus,
                                                 tiny_model, tmp_path):
        out = tmp_path / "summaries.txt"
        entries = export_summaries(str(tiny_model), flat_corpus, out)
        assert len(entries) == 64
        assert all(vec.shape == (32,) for vec in entries.values())
        header = out.read_text().splitlines()[0]
        assert header == "64 32"

    def test_identical_lines_get_identical_vectors(self, tiny_model,
                                                   tmp_path):
        words = ["person", "magnitude", "7.5", "angle", "n", "operation",
                 "area", "small", "movement", "in", "place", "small",
                 "place", "top", "left", "top", "left", "top", "left"]
        path = tmp_path / "flat.txt"
        write_flat_corpus(path, [("a#person", words), ("b#person", words)])
        entries = export_summaries(str(tiny_model), path, tmp_path / "out.txt")
        assert np.allclose(entries["a#person"], entries["b#person"])

    def test_duplicate_keys_rejected(self, tiny_model, tmp_path):
        path = tmp_path / "flat.txt"
        path.write_text("a#person\tperson magnitude 7.5\n"
                        "a#person\tperson magnitude 8.0\n")
        with pytest.raises(ValueError, match="duplicate"):
            export_summaries(str(tiny_model), path, tmp_path / "out.txt")


class TestActionEmbeddings:
    def test_known_tokens_and_oov(self, tiny_model, tmp_path, caplog):
        vocab = tmp_path / "actions.txt"
        vocab.write_text("magnitude\nplace\nunheard_of_action\n")
        out = tmp_path / "emb.txt"
        entries = export_action_embeddings(str(tiny_model), vocab, out)
        assert len(entries) == 3
        assert np.allclose(entries["unheard_of_action"], 0.0)
        assert not np.allclose(entries["magnitude"], 0.0)
        assert "zero vector" in caplog.text

    def test_empty_vocab_rejected(self, tiny_model, tmp_path):
        vocab = tmp_path / "actions.txt"
        vocab.write_text("\n")
        with pytest.raises(ValueError, match="empty"):
            export_action_embeddings(str(tiny_model), vocab,
                                     tmp_path / "out.txt")
