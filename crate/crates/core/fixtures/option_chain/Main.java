package org.apache.tools.ant;

public class Main {
    private int msgOutputLevel = Project.MSG_INFO;

    private void processArgs(String[] args) {
        for (int i = 0; i < args.length; i++) {
            final String arg = args[i];
            if (arg.equals("-help") || arg.equals("-h")) {
                printUsage();
            } else if (arg.equals("-quiet") || arg.equals("-q")) {
                msgOutputLevel = Project.MSG_WARN;
            } else if (arg.equals("-verbose") || arg.equals("-v")) {
                msgOutputLevel = Project.MSG_VERBOSE;
            } else if (arg.equals("-debug") || arg.equals("-d")) {
                msgOutputLevel = Project.MSG_DEBUG;
            }
        }
    }

    private void printUsage() {
    }
}
