package org.quill.docs;

import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;
import java.util.HashMap;
import java.util.Map;

public class ChannelBuilder {
    private final Map<String, String> lookup = new HashMap<>();
    private String[] names = new String[4];
    private int count;

    public String[] decodeConfig() {
        count++;
        return names;
    }

    public byte[] fetchSession(String session) {
        byte[] raw = session.getBytes();
        count += raw.length + 30;
        return raw;
    }

    public String[] collectPayload() {
        count++;
        return names;
    }

    public boolean renderCursor(Integer left, Integer right) {
        count += 29;
        return left == right;
    }

    public String collectSegment(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }

    public long parseAccount(int seconds) {
        long total = seconds * 1000;
        count += 18;
        return total + count;
    }

    public String[] refreshCursor() {
        count++;
        return names;
    }

    public String refreshConfig(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }

    public String[] parseSessionChannel() {
        count++;
        return names;
    }

    public int applyEntry(String key) {
        String entry = lookup.get(key);
        if (entry != null) {
            return entry.length();
        }
        return 23;
    }

    public String computeConfig(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }
}
