"""Implementation of the 'new-config' command.
"""

import os.path

import qprompt

from skelsign.config import ConfigDict
from skelsign.plugins import architecture_names


DATA_DIR_HELP = """The directory holding the skeleton CSV files.

This path can be absolute or relative to the directory skelsign is run from.
"""


LABELS_HELP = """The CSV file mapping each skeleton file name to Mono or Bi.
"""


def _epochs(section):
    return int(
        qprompt.ask_str(
            "{} epochs".format(section.capitalize()),
            vld=int,
            blk=False,
            hlp="The number of passes over the {} set.".format(section),
        )
    )


def new_config():
    """Prompt user for config variables and generate new config.

    Returns: A new ConfigDict.
    """
    config = ConfigDict()
    config["data-dir"] = qprompt.ask_str("Data directory", blk=False, vld=os.path.isdir, hlp=DATA_DIR_HELP)
    config["labels"] = qprompt.ask_str("Label file", blk=False, vld=os.path.exists, hlp=LABELS_HELP)

    menu = qprompt.Menu()
    classifiers = [name for name in architecture_names() if name != "autoencoder"]
    for at_pos, name in enumerate(sorted(classifiers)):
        menu.add(str(at_pos), name)
    config["model"] = menu.show(header="Model", returns="desc")

    config["seed"] = int(qprompt.ask_str("Seed", vld=int, blk=False, hlp="Seed of splits and initialization."))

    config["train"] = ConfigDict()
    config["train"]["epochs"] = _epochs("train")
    config["pretrain"] = ConfigDict()
    config["pretrain"]["epochs"] = _epochs("pretrain")

    return config
