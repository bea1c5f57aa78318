"""Query and retrieve the architecture plugins.
"""

import logging

from stevedore import driver, ExtensionManager

from skelsign.exceptions import SpecError

log = logging.getLogger(__name__)

ARCHITECTURE_NAMESPACE = "skelsign.architectures"


def _log_extension_loading_failure(_mgr, extension_point, err):
    # Logged at error level because logging may not be configured yet.
    log.error('Architecture load failure: extension-point="%s", err="%s"', extension_point, err)


def get_architecture(name):
    """Get an architecture plugin instance by name.

    Raises:
        SpecError: If no architecture of that name is installed.
    """
    if name not in architecture_names():
        raise SpecError("Unknown architecture: {}".format(name))

    manager = driver.DriverManager(
        namespace=ARCHITECTURE_NAMESPACE,
        name=name,
        invoke_on_load=True,
        on_load_failure_callback=_log_extension_loading_failure,
    )
    return manager.driver


def architecture_names():
    """Get all architecture plugin names.

    Returns:
        A sequence of architecture names.
    """
    return ExtensionManager(
        ARCHITECTURE_NAMESPACE,
        on_load_failure_callback=_log_extension_loading_failure,
    ).names()
