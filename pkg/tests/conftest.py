import sys
from importlib import resources
from pathlib import Path

import pytest

from clonesearch.annotate import AnnotationStrategy
from clonesearch.pipeline import build_corpus_index, load_corpus

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
sys.path.insert(0, str(HERE))

BCB_DESCRIPTIONS = resources.files("clonesearch") / "data" / "bcb_descriptions.tsv"

TABLE2_SOURCE = """\
public static void copyFile(File src, File dest) throws IOException {
    FileInputStream fis = new FileInputStream(src);
    FileOutputStream fos = new FileOutputStream(dest);
    java.nio.channels.FileChannel channelSrc = fis.getChannel();
    java.nio.channels.FileChannel channelDest = fos.getChannel();
    channelSrc.transferTo(0, channelSrc.size(), channelDest);
    fis.close();
    fos.close();
}"""

TABLE2_IDENTS = "copi file src dest io except input stream fis output fos java nio channel get transfer to size close"
TABLE2_DOCUMENT = "copi file sourc destin src dest io except input stream fis output fos java nio channel get transfer to size close"
TABLE5_QUERY = "With Java reflection how to instantiate a new object, then call a method on it?"
TABLE5_TERMS = "with java reflect instanti new object call method"


def desk_paths():
    d = FIXTURES / "desk"
    return d / "manifest.tsv", d / "src", d / "annotations.tsv"


@pytest.fixture(scope="session")
def desk_corpus():
    return load_corpus(*desk_paths())


@pytest.fixture(scope="session")
def desk_indexes(desk_corpus):
    return {
        kind: build_corpus_index(desk_corpus, AnnotationStrategy(kind))
        for kind in ("baseline", "manual", "automatic")
    }


@pytest.fixture(scope="session")
def table5_corpus():
    d = FIXTURES / "table5"
    return load_corpus(d / "manifest.tsv", d / "src", str(BCB_DESCRIPTIONS))
