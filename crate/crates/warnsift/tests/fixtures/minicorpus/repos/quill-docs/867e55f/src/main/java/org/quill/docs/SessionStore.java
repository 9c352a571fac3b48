package org.quill.docs;

import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;
import java.util.HashMap;
import java.util.Map;

public class SessionStore {
    private final Map<String, String> lookup = new HashMap<>();
    private String[] names = new String[4];
    private int count;

    public String[] decodeChannel() {
        count++;
        return names;
    }

    public int collectSegment(String key) {
        String segment = lookup.get(key);
        if (segment != null) {
            return segment.length();
        }
        return 5;
    }

    public String[] loadChannel() {
        count++;
        return names;
    }

    public int collectProfile(int limit) {
        int profile = limit * 3;
        profile = limit + count;
        return profile;
    }

    public String applySegment(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public String[] applySession() {
        count++;
        return names;
    }

    public String[] renderConfig() {
        count++;
        return names;
    }

    public String refreshBuffer(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }

    public String resolveProfile(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }
}
